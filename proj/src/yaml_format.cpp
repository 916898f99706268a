#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "format_impl.hpp"
#include "toonbench/formats.hpp"

// Block-style YAML subset: plain/quoted scalars, block mappings and sequences,
// flow syntax only for the {} and [] empties. Anchors, aliases, tags, block
// scalars and general flow style are rejected, as is an empty document.

namespace toonbench::formats::detail {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

std::string_view rtrim(std::string_view s) {
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    return rtrim(s);
}

struct Line {
    int indent = 0;        // column where content starts
    std::string content;   // comment-stripped, right-trimmed
    int number = 0;
};

class YamlParser {
public:
    explicit YamlParser(std::string_view input) { split_lines(input); }

    Value parse_document() {
        if (lines_.empty()) throw AdapterError(FormatKind::Yaml, std::nullopt, "empty document");
        Value root = parse_node(lines_.front().indent);
        if (cursor_ < lines_.size())
            fail(lines_[cursor_].number, "content after the document root");
        return root;
    }

private:
    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw AdapterError(FormatKind::Yaml, line, msg);
    }

    void split_lines(std::string_view input) {
        int number = 0;
        std::size_t pos = 0;
        bool first_content = true;
        while (pos <= input.size()) {
            std::size_t end = input.find('\n', pos);
            if (end == std::string_view::npos) end = input.size();
            ++number;
            std::string_view raw = input.substr(pos, end - pos);
            bool at_input_end = end >= input.size();
            pos = end + 1;
            if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

            std::size_t indent = 0;
            while (indent < raw.size() && raw[indent] == ' ') ++indent;
            if (indent < raw.size() && raw[indent] == '\t')
                throw AdapterError(FormatKind::Yaml, number, "tab character in indentation");
            std::string content = strip_comment(raw.substr(indent), number);
            content = std::string(rtrim(content));
            if (content.empty()) {
                if (at_input_end) break;
                continue;
            }
            if (content == "---" && first_content) {
                first_content = false;  // single leading document marker tolerated
                if (at_input_end) break;
                continue;
            }
            if (content == "...") break;
            if (content.front() == '%')
                throw AdapterError(FormatKind::Yaml, number, "directives are not supported");
            first_content = false;
            lines_.push_back({static_cast<int>(indent), std::move(content), number});
            if (at_input_end) break;
        }
    }

    // Drops a trailing comment, honoring quotes. '#' only starts a comment at
    // the beginning of the content or after whitespace.
    std::string strip_comment(std::string_view s, int number) {
        std::string out;
        char quote = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (quote == '"') {
                if (c == '\\' && i + 1 < s.size()) {
                    out.push_back(c);
                    out.push_back(s[++i]);
                    continue;
                }
                if (c == '"') quote = 0;
            } else if (quote == '\'') {
                if (c == '\'') {
                    if (i + 1 < s.size() && s[i + 1] == '\'') {
                        out += "''";
                        ++i;
                        continue;
                    }
                    quote = 0;
                }
            } else {
                // quotes only open a scalar at a scalar start, not mid-word
                if ((c == '"' || c == '\'') && (i == 0 || is_ws(s[i - 1]))) quote = c;
                else if (c == '#' && (i == 0 || is_ws(s[i - 1]))) return out;
            }
            out.push_back(c);
        }
        if (quote != 0) fail(number, "unterminated quoted scalar");
        return out;
    }

    const Line* peek() const { return cursor_ < lines_.size() ? &lines_[cursor_] : nullptr; }

    static bool is_item_line(const Line& l) {
        return l.content == "-" || l.content.substr(0, 2) == "- ";
    }

    Value parse_node(int block_indent) {
        const Line* first = peek();
        if (!first) fail(0, "unexpected end of document");
        if (first->indent != block_indent) fail(first->number, "unexpected indentation");
        if (is_item_line(*first)) return parse_sequence_block(block_indent);
        if (find_key_split(first->content)) return parse_mapping_block(block_indent);
        int number = first->number;
        std::string content = first->content;
        ++cursor_;
        return parse_flow_or_scalar(content, number);
    }

    Value parse_sequence_block(int block_indent) {
        Sequence items;
        while (const Line* line = peek()) {
            if (line->indent != block_indent || !is_item_line(*line)) break;
            int number = line->number;
            if (line->content == "-") {
                ++cursor_;
                const Line* next = peek();
                if (next && next->indent > block_indent) {
                    items.push_back(parse_node(next->indent));
                } else {
                    items.push_back(Value::null());
                }
                continue;
            }
            // Inline content: re-enter the parser as if the content started a
            // line of its own at its real column.
            std::string content = line->content.substr(2);
            std::size_t extra = 0;
            while (extra < content.size() && content[extra] == ' ') ++extra;
            content = content.substr(extra);
            if (content.empty()) fail(number, "malformed sequence item");
            lines_[cursor_] = {block_indent + 2 + static_cast<int>(extra), std::move(content), number};
            items.push_back(parse_node(block_indent + 2 + static_cast<int>(extra)));
        }
        return Value::sequence(std::move(items));
    }

    // Splits "key: value" at the first ':' followed by space or end-of-line;
    // returns the split offset or nullopt when the line is not a mapping entry.
    static std::optional<std::size_t> find_key_split(std::string_view content) {
        char quote = 0;
        for (std::size_t i = 0; i < content.size(); ++i) {
            char c = content[i];
            if (quote == '"') {
                if (c == '\\') ++i;
                else if (c == '"') quote = 0;
            } else if (quote == '\'') {
                if (c == '\'') quote = 0;
            } else {
                if (i == 0 && (c == '"' || c == '\'')) quote = c;
                else if (c == ':' && (i + 1 == content.size() || content[i + 1] == ' '))
                    return i;
            }
        }
        return std::nullopt;
    }

    Value parse_mapping_block(int block_indent) {
        Mapping members;
        while (const Line* line = peek()) {
            if (line->indent != block_indent || is_item_line(*line)) break;
            auto split = find_key_split(line->content);
            if (!split) fail(line->number, "expected a 'key: value' entry");
            int number = line->number;
            std::string key = parse_key(trim(std::string_view(line->content).substr(0, *split)), number);
            std::string rest(trim(std::string_view(line->content).substr(*split + 1)));
            ++cursor_;

            Value value = Value::null();
            if (!rest.empty()) {
                value = parse_flow_or_scalar(rest, number);
            } else {
                const Line* next = peek();
                if (next && next->indent > block_indent) {
                    value = parse_node(next->indent);
                } else if (next && next->indent == block_indent && is_item_line(*next)) {
                    // Sequences may sit at the same indent as their key.
                    value = parse_sequence_block(block_indent);
                }
            }
            for (const auto& m : members)
                if (m.key == key) fail(number, "duplicate key '" + key + "'");
            members.push_back({std::move(key), std::move(value)});
        }
        return Value::mapping(std::move(members));
    }

    std::string parse_key(std::string_view raw, int number) {
        if (raw.empty()) fail(number, "empty mapping key");
        if (raw.front() == '"' || raw.front() == '\'') {
            std::size_t i = 0;
            std::string key = take_quoted(raw, i, number);
            if (!trim(raw.substr(i)).empty()) fail(number, "content after quoted key");
            return key;
        }
        if (raw.front() == '?') fail(number, "complex mapping keys are not supported");
        return std::string(raw);
    }

    std::string take_quoted(std::string_view s, std::size_t& i, int number) {
        char q = s[i++];
        std::string out;
        while (i < s.size()) {
            char c = s[i];
            if (q == '\'') {
                if (c == '\'') {
                    if (i + 1 < s.size() && s[i + 1] == '\'') {
                        out.push_back('\'');
                        i += 2;
                        continue;
                    }
                    ++i;
                    return out;
                }
                out.push_back(c);
                ++i;
                continue;
            }
            if (c == '"') {
                ++i;
                return out;
            }
            if (c == '\\') {
                if (i + 1 >= s.size()) fail(number, "dangling escape");
                char e = s[i + 1];
                i += 2;
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case '/': out.push_back('/'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case '0': out.push_back('\0'); break;
                    case 'u': {
                        if (i + 4 > s.size()) fail(number, "truncated \\u escape");
                        unsigned cp = 0;
                        for (int k = 0; k < 4; ++k) {
                            char h = s[i + static_cast<std::size_t>(k)];
                            cp <<= 4;
                            if (h >= '0' && h <= '9') cp |= static_cast<unsigned>(h - '0');
                            else if (h >= 'a' && h <= 'f') cp |= static_cast<unsigned>(h - 'a' + 10);
                            else if (h >= 'A' && h <= 'F') cp |= static_cast<unsigned>(h - 'A' + 10);
                            else fail(number, "invalid \\u escape");
                        }
                        i += 4;
                        if (cp < 0x80) {
                            out.push_back(static_cast<char>(cp));
                        } else if (cp < 0x800) {
                            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                        } else {
                            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                        }
                        break;
                    }
                    default:
                        fail(number, std::string("unknown escape \\") + e);
                }
                continue;
            }
            out.push_back(c);
            ++i;
        }
        fail(number, "unterminated quoted scalar");
    }

    Value parse_flow_or_scalar(std::string_view raw, int number) {
        std::string_view t = trim(raw);
        if (t == "{}") return Value::mapping({});
        if (t == "[]") return Value::sequence({});
        switch (t.front()) {
            case '{':
            case '[':
                fail(number, "flow-style collections are not in the supported subset");
            case '&':
            case '*':
                fail(number, "anchors and aliases are not in the supported subset");
            case '!':
                fail(number, "tags are not in the supported subset");
            case '|':
            case '>':
                fail(number, "block scalars are not in the supported subset");
            case '}':
            case ']':
            case ',':
            case '?':
                fail(number, "unexpected indicator character");
            default:
                break;
        }
        if (t.front() == '"' || t.front() == '\'') {
            std::size_t i = 0;
            std::string text = take_quoted(t, i, number);
            if (!trim(t.substr(i)).empty()) fail(number, "content after quoted scalar");
            return Value::text(std::move(text));
        }
        if (t == "-" || t.substr(0, 2) == "- ")
            fail(number, "sequence entry is not allowed in this context");
        // ": " inside a plain scalar would have been an implicit-key ambiguity.
        if (find_key_split(t)) fail(number, "plain scalar contains ': '");
        return resolve_plain(t);
    }

    static Value resolve_plain(std::string_view t) {
        if (t == "null" || t == "Null" || t == "NULL" || t == "~") return Value::null();
        if (t == "true" || t == "True" || t == "TRUE") return Value::boolean(true);
        if (t == "false" || t == "False" || t == "FALSE") return Value::boolean(false);
        if (auto num = Decimal::parse(t)) return Value::number(std::move(*num));
        return Value::text(std::string(t));
    }

    std::vector<Line> lines_;
    std::size_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Writer

bool plain_safe(std::string_view s) {
    if (s.empty()) return false;
    if (is_ws(s.front()) || is_ws(s.back())) return false;
    constexpr std::string_view indicators = "-?:,[]{}#&*!|>'\"%@`";
    if (indicators.find(s.front()) != std::string_view::npos) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x20 || c == 0x7F) return false;
        // ':' before a space or at the end reads as a key separator
        if (s[i] == ':' && (i + 1 == s.size() || s[i + 1] == ' ')) return false;
        if (s[i] == ' ' && i + 1 < s.size() && s[i + 1] == '#') return false;
        // a quote after whitespace would be read as a quoted-scalar start
        if ((s[i] == '"' || s[i] == '\'') && (i == 0 || s[i - 1] == ' ')) return false;
    }
    if (s == "null" || s == "Null" || s == "NULL" || s == "~") return false;
    if (s == "true" || s == "True" || s == "TRUE") return false;
    if (s == "false" || s == "False" || s == "FALSE") return false;
    if (is_json_number(s)) return false;
    return true;
}

std::string yaml_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
    return out;
}

std::string yaml_scalar(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Null: return "null";
        case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
        case Value::Kind::Number: return v.as_number().text();
        case Value::Kind::Text:
            return plain_safe(v.as_text()) ? v.as_text() : yaml_quote(v.as_text());
        default:
            throw std::logic_error("yaml_scalar on a container");
    }
}

std::string yaml_key(const std::string& key) {
    // ':' anywhere in a key is unsafe: the parser splits at ':'+space.
    if (plain_safe(key) && key.find(':') == std::string::npos) return key;
    return yaml_quote(key);
}

void write_node(std::string& out, const Value& v, int col, const std::string& lead) {
    const std::string pad(static_cast<std::size_t>(col), ' ');
    switch (v.kind()) {
        case Value::Kind::Mapping: {
            const auto& members = v.members();
            if (members.empty()) {
                out += lead + "{}\n";
                return;
            }
            for (std::size_t i = 0; i < members.size(); ++i) {
                const std::string head = (i == 0 ? lead : pad) + yaml_key(members[i].key) + ":";
                const Value& mv = members[i].value;
                if (mv.is_scalar()) {
                    out += head + " " + yaml_scalar(mv) + "\n";
                } else if (mv.empty_container()) {
                    out += head + (mv.kind() == Value::Kind::Mapping ? " {}\n" : " []\n");
                } else {
                    out += head + "\n";
                    write_node(out, mv, col + 2, std::string(static_cast<std::size_t>(col) + 2, ' '));
                }
            }
            return;
        }
        case Value::Kind::Sequence: {
            const auto& items = v.items();
            if (items.empty()) {
                out += lead + "[]\n";
                return;
            }
            for (std::size_t i = 0; i < items.size(); ++i)
                write_node(out, items[i], col + 2, (i == 0 ? lead : pad) + "- ");
            return;
        }
        default:
            out += lead + yaml_scalar(v) + "\n";
    }
}

}  // namespace

Value parse_yaml(std::string_view input) { return YamlParser(input).parse_document(); }

std::string serialize_yaml(const Value& v) {
    if (v.is_scalar()) return yaml_scalar(v);
    if (v.empty_container()) return v.kind() == Value::Kind::Mapping ? "{}" : "[]";
    std::string out;
    write_node(out, v, 0, "");
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

}  // namespace toonbench::formats::detail
