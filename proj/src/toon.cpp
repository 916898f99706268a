#include "toonbench/toon.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace toonbench::toon {

namespace {

constexpr std::string_view kTrue = "true";
constexpr std::string_view kFalse = "false";
constexpr std::string_view kNull = "null";

bool is_space(char c) { return c == ' '; }
bool is_ws(char c) { return c == ' ' || c == '\t'; }

bool is_bare_key_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
}

bool is_bare_key(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), is_bare_key_char);
}

std::string_view rtrim(std::string_view s) {
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    return rtrim(s);
}

void append_utf8(std::string& out, unsigned cp) {
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
}

struct Line {
    int depth = 0;
    std::string_view text;  // content after indentation, right-trimmed
    int number = 0;         // 1-based in the original input
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(std::string_view input, const Dialect& dialect, const ParseOptions& options)
        : dialect_(dialect), strict_(options.strict) {
        normalized_.reserve(input.size());
        if (input.substr(0, 3) == "\xEF\xBB\xBF") input.remove_prefix(3);
        for (std::size_t i = 0; i < input.size(); ++i) {
            if (input[i] == '\r' && i + 1 < input.size() && input[i + 1] == '\n') continue;
            normalized_.push_back(input[i] == '\r' ? '\n' : input[i]);
        }
        split_lines();
    }

    Value parse_document() {
        if (lines_.empty()) return Value::mapping({});
        const Line& first = lines_.front();
        Value root = Value::null();
        if (first.depth != 0) fail(ErrorKind::IndentationError, first.number, "document must start at column 0");
        if (first.text.front() == '[') {
            Head head = parse_head(first.text, first.number, /*keyless=*/true);
            ++cursor_;
            root = parse_array_body(head, first.number, 1);
        } else {
            root = parse_mapping_block(0);
        }
        if (cursor_ < lines_.size())
            fail(ErrorKind::IndentationError, lines_[cursor_].number, "unexpected indentation");
        return root;
    }

private:
    struct Head {
        std::optional<std::string> key;
        bool has_array = false;
        std::size_t declared_n = 0;
        std::optional<std::vector<std::string>> fields;
        std::string_view rest;  // inline payload after the colon, untrimmed left
    };

    [[noreturn]] void fail(ErrorKind kind, int line, const std::string& msg) const {
        throw ToonError(kind, line, msg);
    }

    void split_lines() {
        std::string_view s = normalized_;
        int number = 0;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t end = s.find('\n', pos);
            if (end == std::string_view::npos) end = s.size();
            ++number;
            std::string_view raw = s.substr(pos, end - pos);
            pos = end + 1;
            std::size_t spaces = 0;
            while (spaces < raw.size() && raw[spaces] == ' ') ++spaces;
            if (spaces < raw.size() && raw[spaces] == '\t')
                fail(ErrorKind::IndentationError, number, "tab character in indentation");
            std::string_view content = rtrim(raw.substr(spaces));
            if (content.empty()) {
                if (pos > s.size()) break;
                continue;  // blank lines carry no structure
            }
            if (spaces % static_cast<std::size_t>(dialect_.indent_width) != 0)
                fail(ErrorKind::IndentationError, number,
                     "indentation of " + std::to_string(spaces) + " spaces is not a multiple of " +
                         std::to_string(dialect_.indent_width));
            lines_.push_back({static_cast<int>(spaces) / dialect_.indent_width, content, number});
            if (pos > s.size()) break;
        }
    }

    const Line* peek() const { return cursor_ < lines_.size() ? &lines_[cursor_] : nullptr; }

    // Decodes a double-quoted string starting at text[i] == '"'; i advances
    // past the closing quote.
    std::string take_quoted(std::string_view text, std::size_t& i, int line) {
        std::string out;
        ++i;
        while (i < text.size()) {
            char c = text[i];
            if (c == '"') {
                ++i;
                return out;
            }
            if (c == '\\') {
                if (i + 1 >= text.size())
                    fail(ErrorKind::UnterminatedQuote, line, "dangling escape at end of line");
                char e = text[i + 1];
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
                    case 'u': {
                        if (i + 4 > text.size())
                            fail(ErrorKind::MalformedHeader, line, "truncated \\u escape");
                        unsigned cp = 0;
                        for (int k = 0; k < 4; ++k) {
                            char h = text[i + static_cast<std::size_t>(k)];
                            cp <<= 4;
                            if (h >= '0' && h <= '9') cp |= static_cast<unsigned>(h - '0');
                            else if (h >= 'a' && h <= 'f') cp |= static_cast<unsigned>(h - 'a' + 10);
                            else if (h >= 'A' && h <= 'F') cp |= static_cast<unsigned>(h - 'A' + 10);
                            else fail(ErrorKind::MalformedHeader, line, "invalid \\u escape");
                        }
                        i += 4;
                        append_utf8(out, cp);
                        break;
                    }
                    default:
                        fail(ErrorKind::MalformedHeader, line, std::string("unknown escape \\") + e);
                }
                continue;
            }
            out.push_back(c);
            ++i;
        }
        fail(ErrorKind::UnterminatedQuote, line, "unterminated quoted string");
    }

    // Parses `key[N]{f1,f2}: rest` (key optional when keyless). Returns
    // nullopt on a shape that cannot be an entry head; hard errors inside an
    // unambiguous head still throw.
    std::optional<Head> try_parse_head(std::string_view text, int line, bool keyless) {
        Head head;
        std::size_t i = 0;
        if (!keyless) {
            if (text[0] == '"') {
                head.key = take_quoted(text, i, line);
            } else {
                while (i < text.size() && is_bare_key_char(text[i])) ++i;
                if (i == 0) return std::nullopt;
                head.key = std::string(text.substr(0, i));
            }
        }
        if (i < text.size() && text[i] == '[') {
            ++i;
            std::size_t digits = 0;
            std::size_t n = 0;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
                n = n * 10 + static_cast<std::size_t>(text[i] - '0');
                ++i;
                if (++digits > 9) fail(ErrorKind::MalformedHeader, line, "array length too large");
            }
            if (digits == 0 || i >= text.size() || text[i] != ']') {
                if (keyless) return std::nullopt;
                fail(ErrorKind::MalformedHeader, line, "malformed array length declaration");
            }
            ++i;
            head.has_array = true;
            head.declared_n = n;
        }
        if (i < text.size() && text[i] == '{') {
            if (!head.has_array)
                fail(ErrorKind::MalformedHeader, line, "field list requires a declared array length");
            ++i;
            std::vector<std::string> fields;
            while (true) {
                while (i < text.size() && is_space(text[i])) ++i;
                if (i >= text.size())
                    fail(ErrorKind::MalformedHeader, line, "unterminated field list");
                std::string field;
                if (text[i] == '"') {
                    field = take_quoted(text, i, line);
                } else {
                    std::size_t start = i;
                    while (i < text.size() && is_bare_key_char(text[i])) ++i;
                    if (i == start)
                        fail(ErrorKind::MalformedHeader, line, "empty field name");
                    field = std::string(text.substr(start, i - start));
                }
                fields.push_back(std::move(field));
                while (i < text.size() && is_space(text[i])) ++i;
                if (i < text.size() && text[i] == dialect_.delimiter) {
                    ++i;
                    continue;
                }
                break;
            }
            if (i >= text.size() || text[i] != '}')
                fail(ErrorKind::MalformedHeader, line, "unterminated field list");
            ++i;
            head.fields = std::move(fields);
        }
        if (i >= text.size() || text[i] != ':') return std::nullopt;
        ++i;
        if (i >= text.size()) {
            head.rest = {};
            return head;
        }
        if (text[i] != ' ')
            fail(ErrorKind::MalformedHeader, line, "expected a space after ':'");
        head.rest = text.substr(i + 1);
        if (trim(head.rest).empty()) head.rest = {};
        return head;
    }

    Head parse_head(std::string_view text, int line, bool keyless) {
        auto head = try_parse_head(text, line, keyless);
        if (!head) fail(ErrorKind::MalformedHeader, line, "expected 'key:' entry");
        return *head;
    }

    Value parse_scalar(std::string_view text, int line) {
        std::string_view t = trim(text);
        if (t.empty()) fail(ErrorKind::MalformedHeader, line, "empty value");
        if (t.front() == '"') {
            std::size_t i = 0;
            std::string decoded = take_quoted(t, i, line);
            if (!trim(t.substr(i)).empty())
                fail(ErrorKind::MalformedHeader, line, "unexpected content after quoted value");
            return Value::text(std::move(decoded));
        }
        if (t == kTrue) return Value::boolean(true);
        if (t == kFalse) return Value::boolean(false);
        if (t == kNull) return Value::null();
        if (auto num = Decimal::parse(t)) return Value::number(std::move(*num));
        return Value::text(std::string(t));
    }

    // Splits an inline payload or tabular row into delimiter-separated cells,
    // honoring quotes. Strict about stray quotes mid-cell.
    std::vector<Value> parse_cells(std::string_view text, int line) {
        std::vector<Value> cells;
        std::size_t i = 0;
        while (true) {
            while (i < text.size() && is_space(text[i])) ++i;
            std::size_t cell_start = i;
            Value cell = Value::null();
            bool have_cell = false;
            if (i < text.size() && text[i] == '"') {
                std::string decoded = take_quoted(text, i, line);
                cell = Value::text(std::move(decoded));
                have_cell = true;
                while (i < text.size() && is_space(text[i])) ++i;
                if (i < text.size() && text[i] != dialect_.delimiter)
                    fail(ErrorKind::MalformedHeader, line, "unexpected content after quoted cell");
            } else {
                while (i < text.size() && text[i] != dialect_.delimiter) {
                    if (text[i] == '"')
                        fail(ErrorKind::MalformedHeader, line, "quote inside unquoted cell");
                    ++i;
                }
                std::string_view raw = trim(text.substr(cell_start, i - cell_start));
                if (raw.empty())
                    fail(ErrorKind::MalformedHeader, line, "empty unquoted cell");
                cell = parse_scalar(raw, line);
                have_cell = true;
            }
            if (have_cell) cells.push_back(std::move(cell));
            if (i >= text.size()) break;
            ++i;  // skip delimiter
            if (i >= text.size() || trim(text.substr(i)).empty())
                fail(ErrorKind::MalformedHeader, line, "trailing delimiter");
        }
        return cells;
    }

    Value parse_mapping_block(int depth) {
        Mapping members;
        std::set<std::string> seen;
        while (const Line* line = peek()) {
            if (line->depth != depth) break;
            if (line->text == "-" || line->text.substr(0, 2) == "- ")
                fail(ErrorKind::MalformedHeader, line->number, "list item outside a declared array");
            Head head = parse_head(line->text, line->number, /*keyless=*/false);
            int number = line->number;
            ++cursor_;
            Value value = parse_entry_value(head, number, depth + 1);
            insert_member(members, seen, *head.key, std::move(value), number);
        }
        return Value::mapping(std::move(members));
    }

    void insert_member(Mapping& members, std::set<std::string>& seen, const std::string& key,
                       Value value, int line) {
        if (!seen.insert(key).second) {
            if (strict_) fail(ErrorKind::DuplicateKey, line, "duplicate key '" + key + "'");
            for (auto& m : members) {
                if (m.key == key) {
                    m.value = std::move(value);
                    return;
                }
            }
        }
        members.push_back({key, std::move(value)});
    }

    // Value of one entry whose head has been consumed; nested content sits at
    // `child_depth`.
    Value parse_entry_value(const Head& head, int line, int child_depth) {
        if (head.has_array) return parse_array_body(head, line, child_depth);
        if (!head.rest.empty()) return parse_scalar(head.rest, line);
        const Line* next = peek();
        if (next && next->depth >= child_depth) {
            if (next->depth > child_depth)
                fail(ErrorKind::IndentationError, next->number, "indentation jumps more than one level");
            if (next->text == "-" || next->text.substr(0, 2) == "- ")
                fail(ErrorKind::MalformedHeader, next->number,
                     "list item under a key with no declared array length");
            return parse_mapping_block(child_depth);
        }
        return Value::mapping({});  // "key:" with no block is an empty mapping
    }

    Value parse_array_body(const Head& head, int line, int child_depth) {
        if (head.fields) {
            if (!head.rest.empty())
                fail(ErrorKind::MalformedHeader, line, "unexpected content after tabular header");
            return parse_tabular_rows(head, line, child_depth);
        }
        if (!head.rest.empty()) {
            std::vector<Value> cells = parse_cells(head.rest, line);
            if (strict_ && cells.size() != head.declared_n)
                fail(ErrorKind::LengthMismatch, line,
                     "declared " + std::to_string(head.declared_n) + " elements, found " +
                         std::to_string(cells.size()));
            return Value::sequence(std::move(cells));
        }
        return parse_list_items(head, line, child_depth);
    }

    Value parse_tabular_rows(const Head& head, int line, int child_depth) {
        const auto& fields = *head.fields;
        {
            std::set<std::string_view> unique(fields.begin(), fields.end());
            if (strict_ && unique.size() != fields.size())
                fail(ErrorKind::DuplicateKey, line, "duplicate field name in tabular header");
        }
        Sequence rows;
        while (const Line* row = peek()) {
            if (row->depth != child_depth) {
                if (row->depth > child_depth)
                    fail(ErrorKind::IndentationError, row->number, "indentation jumps more than one level");
                break;
            }
            std::vector<Value> cells = parse_cells(row->text, row->number);
            if (cells.size() != fields.size()) {
                if (strict_)
                    fail(ErrorKind::FieldCountMismatch, row->number,
                         "row has " + std::to_string(cells.size()) + " cells, header declares " +
                             std::to_string(fields.size()));
                cells.resize(std::min(cells.size(), fields.size()));
            }
            Mapping row_members;
            for (std::size_t i = 0; i < cells.size(); ++i)
                row_members.push_back({fields[i], std::move(cells[i])});
            rows.push_back(Value::mapping(std::move(row_members)));
            ++cursor_;
        }
        if (strict_ && rows.size() != head.declared_n)
            fail(ErrorKind::LengthMismatch, line,
                 "declared " + std::to_string(head.declared_n) + " rows, found " +
                     std::to_string(rows.size()));
        return Value::sequence(std::move(rows));
    }

    Value parse_list_items(const Head& head, int line, int child_depth) {
        Sequence items;
        while (const Line* item = peek()) {
            if (item->depth != child_depth) {
                if (item->depth > child_depth)
                    fail(ErrorKind::IndentationError, item->number, "indentation jumps more than one level");
                break;
            }
            if (item->text != "-" && item->text.substr(0, 2) != "- ") break;
            int number = item->number;
            ++cursor_;
            if (item->text == "-") {
                items.push_back(Value::mapping({}));  // bare hyphen: empty object item
                continue;
            }
            std::string_view content = trim(item->text.substr(2));
            items.push_back(parse_item_content(content, number, child_depth));
        }
        if (strict_ && items.size() != head.declared_n)
            fail(ErrorKind::LengthMismatch, line,
                 "declared " + std::to_string(head.declared_n) + " elements, found " +
                     std::to_string(items.size()));
        return Value::sequence(std::move(items));
    }

    Value parse_item_content(std::string_view content, int line, int item_depth) {
        if (content.front() == '[') {
            if (auto head = try_parse_head(content, line, /*keyless=*/true))
                return parse_array_body(*head, line, item_depth + 1);
            return parse_scalar(content, line);
        }
        std::optional<Head> head;
        if (content.front() == '"' || is_bare_key_char(content.front()))
            head = try_parse_head(content, line, /*keyless=*/false);
        if (!head) return parse_scalar(content, line);

        // Object item: the first field rides the hyphen line, the remaining
        // fields sit one level deeper.
        Mapping members;
        std::set<std::string> seen;
        Value first = parse_entry_value(*head, line, item_depth + 2);
        insert_member(members, seen, *head->key, std::move(first), line);
        while (const Line* field = peek()) {
            if (field->depth != item_depth + 1) break;
            if (field->text == "-" || field->text.substr(0, 2) == "- ") break;
            Head field_head = parse_head(field->text, field->number, /*keyless=*/false);
            int number = field->number;
            ++cursor_;
            Value value = parse_entry_value(field_head, number, item_depth + 2);
            insert_member(members, seen, *field_head.key, std::move(value), number);
        }
        return Value::mapping(std::move(members));
    }

    Dialect dialect_;
    bool strict_;
    std::string normalized_;
    std::vector<Line> lines_;
    std::size_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Serializer

class Writer {
public:
    explicit Writer(const Dialect& dialect) : dialect_(dialect) {}

    std::string serialize_root(const Value& v) {
        switch (v.kind()) {
            case Value::Kind::Mapping:
                write_mapping_block(v.members(), 0);
                return std::move(out_);
            case Value::Kind::Sequence:
                write_array("", v.items(), 1);
                return std::move(out_);
            default:
                throw UnrepresentableValue("TOON document root must be a mapping or a sequence");
        }
    }

private:
    std::string indent(int depth) const {
        return std::string(static_cast<std::size_t>(depth) * static_cast<std::size_t>(dialect_.indent_width), ' ');
    }

    std::string key_text(const std::string& key) const {
        if (key.empty()) throw UnrepresentableValue("empty mapping key has no TOON encoding");
        if (is_bare_key(key)) return key;
        return quote(key);
    }

    std::string quote(std::string_view s) const {
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

    bool needs_quotes(std::string_view s) const {
        if (s.empty()) return true;
        if (is_ws(s.front()) || is_ws(s.back())) return true;
        if (s.front() == '[' || s.front() == '"') return true;
        if (s == kTrue || s == kFalse || s == kNull) return true;
        if (is_json_number(s)) return true;
        for (char c : s) {
            if (c == dialect_.delimiter || c == ':' || c == '"' || c == '\\' ||
                static_cast<unsigned char>(c) < 0x20)
                return true;
        }
        return false;
    }

    std::string scalar_text(const Value& v) const {
        switch (v.kind()) {
            case Value::Kind::Null: return "null";
            case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
            case Value::Kind::Number: return v.as_number().text();
            case Value::Kind::Text:
                return needs_quotes(v.as_text()) ? quote(v.as_text()) : v.as_text();
            default:
                throw std::logic_error("scalar_text on a container");
        }
    }

    void write_mapping_block(const Mapping& members, int depth) {
        for (const auto& m : members)
            write_member(indent(depth) + key_text(m.key), m.value, depth + 1);
    }

    // `prefix` already carries indentation (and the "- " marker for the first
    // field of an object item).
    void write_member(const std::string& prefix, const Value& v, int child_depth) {
        switch (v.kind()) {
            case Value::Kind::Sequence:
                write_array(prefix, v.items(), child_depth);
                return;
            case Value::Kind::Mapping:
                out_ += prefix;
                out_ += ":\n";
                write_mapping_block(v.members(), child_depth);
                return;
            default:
                out_ += prefix;
                out_ += ": ";
                out_ += scalar_text(v);
                out_.push_back('\n');
        }
    }

    static bool all_scalars(const Sequence& items) {
        return std::all_of(items.begin(), items.end(), [](const Value& v) { return v.is_scalar(); });
    }

    // Uniform all-scalar mappings over one key set become a table; field order
    // follows the first element.
    static std::optional<std::vector<std::string>> tabular_fields(const Sequence& items) {
        if (items.empty()) return std::nullopt;
        if (items.front().kind() != Value::Kind::Mapping) return std::nullopt;
        std::vector<std::string> fields;
        for (const auto& m : items.front().members()) fields.push_back(m.key);
        if (fields.empty()) return std::nullopt;
        std::set<std::string> key_set(fields.begin(), fields.end());
        for (const auto& item : items) {
            if (item.kind() != Value::Kind::Mapping) return std::nullopt;
            const auto& members = item.members();
            if (members.size() != fields.size()) return std::nullopt;
            for (const auto& m : members) {
                if (!m.value.is_scalar()) return std::nullopt;
                if (key_set.count(m.key) == 0) return std::nullopt;
            }
        }
        return fields;
    }

    void write_array(const std::string& prefix, const Sequence& items, int child_depth) {
        std::string head = prefix + "[" + std::to_string(items.size()) + "]";
        if (all_scalars(items)) {
            out_ += head;
            out_ += ":";
            for (std::size_t i = 0; i < items.size(); ++i) {
                out_ += (i == 0) ? " " : std::string(1, dialect_.delimiter);
                out_ += scalar_text(items[i]);
            }
            out_.push_back('\n');
            return;
        }
        if (auto fields = tabular_fields(items)) {
            out_ += head;
            out_.push_back('{');
            for (std::size_t i = 0; i < fields->size(); ++i) {
                if (i) out_.push_back(dialect_.delimiter);
                out_ += key_text((*fields)[i]);
            }
            out_ += "}:\n";
            for (const auto& row : items) {
                out_ += indent(child_depth);
                for (std::size_t i = 0; i < fields->size(); ++i) {
                    if (i) out_.push_back(dialect_.delimiter);
                    out_ += scalar_text(*row.find((*fields)[i]));
                }
                out_.push_back('\n');
            }
            return;
        }
        out_ += head;
        out_ += ":\n";
        for (const auto& item : items) write_list_item(item, child_depth);
    }

    void write_list_item(const Value& item, int item_depth) {
        const std::string marker = indent(item_depth) + "- ";
        switch (item.kind()) {
            case Value::Kind::Sequence:
                write_array(marker, item.items(), item_depth + 1);
                return;
            case Value::Kind::Mapping: {
                const auto& members = item.members();
                if (members.empty()) {
                    out_ += indent(item_depth);
                    out_ += "-\n";
                    return;
                }
                write_member(marker + key_text(members.front().key), members.front().value,
                             item_depth + 2);
                for (std::size_t i = 1; i < members.size(); ++i)
                    write_member(indent(item_depth + 1) + key_text(members[i].key),
                                 members[i].value, item_depth + 2);
                return;
            }
            default:
                out_ += marker;
                out_ += scalar_text(item);
                out_.push_back('\n');
        }
    }

    Dialect dialect_;
    std::string out_;
};

}  // namespace

std::string_view error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::IndentationError: return "IndentationError";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::FieldCountMismatch: return "FieldCountMismatch";
        case ErrorKind::UnterminatedQuote: return "UnterminatedQuote";
        case ErrorKind::DuplicateKey: return "DuplicateKey";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
    }
    return "UnknownError";
}

ToonError::ToonError(ErrorKind kind, int line, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + " at line " + std::to_string(line) +
                         ": " + message),
      kind_(kind),
      line_(line) {}

void validate_dialect(const Dialect& d) {
    if (d.indent_width < 1) throw std::invalid_argument("indent_width must be >= 1");
    if (d.delimiter == '\n' || d.delimiter == ' ' || d.delimiter == '"' || d.delimiter == '\\' ||
        d.delimiter == '\r')
        throw std::invalid_argument("delimiter collides with line or quote structure");
}

Value parse(std::string_view input, const Dialect& dialect, const ParseOptions& options) {
    validate_dialect(dialect);
    return Parser(input, dialect, options).parse_document();
}

std::string serialize(const Value& v, const Dialect& dialect) {
    validate_dialect(dialect);
    std::string out = Writer(dialect).serialize_root(v);
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

Validation validate(std::string_view input, const Dialect& dialect) {
    try {
        parse(input, dialect, ParseOptions{.strict = true});
        return {true, std::nullopt};
    } catch (const ToonError& e) {
        return {false, e};
    }
}

}  // namespace toonbench::toon
