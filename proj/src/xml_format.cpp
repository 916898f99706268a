#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "format_impl.hpp"
#include "toonbench/formats.hpp"

namespace toonbench::formats::detail {

namespace {

bool is_xml_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_xml_name(std::string_view s) {
    if (s.empty() || !is_name_start(s.front())) return false;
    return std::all_of(s.begin(), s.end(), is_name_char);
}

class XmlParser {
public:
    explicit XmlParser(std::string_view input) : s_(input) {}

    Value parse_document() {
        skip_misc();
        if (at_end() || s_[i_] != '<') fail("expected a root element");
        auto [name, value] = parse_element();
        skip_misc();
        if (!at_end()) fail("content after the root element");
        Mapping root;
        root.push_back({std::move(name), std::move(value)});
        return Value::mapping(std::move(root));
    }

private:
    bool at_end() const { return i_ >= s_.size(); }

    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1;
        for (std::size_t k = 0; k < i_ && k < s_.size(); ++k)
            if (s_[k] == '\n') ++line;
        throw AdapterError(FormatKind::Xml, line, msg);
    }

    void skip_ws() {
        while (!at_end() && is_xml_ws(s_[i_])) ++i_;
    }

    // Whitespace, comments and processing instructions between elements.
    void skip_misc() {
        while (true) {
            skip_ws();
            if (s_.substr(i_, 4) == "<!--") {
                std::size_t end = s_.find("-->", i_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                i_ = end + 3;
                continue;
            }
            if (s_.substr(i_, 2) == "<?") {
                std::size_t end = s_.find("?>", i_ + 2);
                if (end == std::string_view::npos) fail("unterminated processing instruction");
                i_ = end + 2;
                continue;
            }
            if (s_.substr(i_, 2) == "<!") fail("doctype and CDATA sections are not supported");
            return;
        }
    }

    std::string parse_name() {
        std::size_t start = i_;
        if (at_end() || !is_name_start(s_[i_])) fail("expected a name");
        while (!at_end() && is_name_char(s_[i_])) ++i_;
        return std::string(s_.substr(start, i_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t k = 0; k < raw.size();) {
            if (raw[k] != '&') {
                out.push_back(raw[k++]);
                continue;
            }
            std::size_t semi = raw.find(';', k + 1);
            if (semi == std::string_view::npos) fail("unterminated entity reference");
            std::string_view ent = raw.substr(k + 1, semi - k - 1);
            if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "amp") out.push_back('&');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (!ent.empty() && ent.front() == '#') {
                unsigned cp = 0;
                bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
                std::string_view digits = ent.substr(hex ? 2 : 1);
                if (digits.empty()) fail("empty character reference");
                for (char c : digits) {
                    unsigned d;
                    if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
                    else if (hex && c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
                    else if (hex && c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
                    else fail("malformed character reference");
                    cp = cp * (hex ? 16u : 10u) + d;
                    if (cp > 0x10FFFF) fail("character reference out of range");
                }
                if (cp < 0x80) {
                    out.push_back(static_cast<char>(cp));
                } else if (cp < 0x800) {
                    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                } else if (cp < 0x10000) {
                    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                } else {
                    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                }
            } else {
                fail("unknown entity '&" + std::string(ent) + ";'");
            }
            k = semi + 1;
        }
        return out;
    }

    // Returns (element name, mapped value).
    std::pair<std::string, Value> parse_element() {
        ++i_;  // '<'
        std::string name = parse_name();
        Mapping attrs;
        while (true) {
            skip_ws();
            if (at_end()) fail("unterminated start tag");
            if (s_[i_] == '/') {
                if (s_.substr(i_, 2) != "/>") fail("malformed empty-element tag");
                i_ += 2;
                return {std::move(name), finish_element(std::move(attrs), "", {})};
            }
            if (s_[i_] == '>') {
                ++i_;
                break;
            }
            std::string attr = parse_name();
            skip_ws();
            if (at_end() || s_[i_] != '=') fail("expected '=' after attribute name");
            ++i_;
            skip_ws();
            if (at_end() || (s_[i_] != '"' && s_[i_] != '\'')) fail("attribute value must be quoted");
            char q = s_[i_++];
            std::size_t start = i_;
            while (!at_end() && s_[i_] != q) {
                if (s_[i_] == '<') fail("'<' in attribute value");
                ++i_;
            }
            if (at_end()) fail("unterminated attribute value");
            std::string decoded = decode_entities(s_.substr(start, i_ - start));
            ++i_;
            std::string key = "@" + attr;
            for (const auto& m : attrs)
                if (m.key == key) fail("duplicate attribute '" + attr + "'");
            attrs.push_back({std::move(key), Value::text(std::move(decoded))});
        }

        std::string raw_text;
        std::vector<std::pair<std::string, Value>> children;
        while (true) {
            if (at_end()) fail("unterminated element <" + name + ">");
            if (s_[i_] == '<') {
                if (s_.substr(i_, 2) == "</") {
                    i_ += 2;
                    std::string closing = parse_name();
                    skip_ws();
                    if (at_end() || s_[i_] != '>') fail("malformed end tag");
                    ++i_;
                    if (closing != name)
                        fail("mismatched end tag </" + closing + "> for <" + name + ">");
                    return {std::move(name),
                            finish_element(std::move(attrs), raw_text, std::move(children))};
                }
                if (s_.substr(i_, 4) == "<!--") {
                    std::size_t end = s_.find("-->", i_ + 4);
                    if (end == std::string_view::npos) fail("unterminated comment");
                    i_ = end + 3;
                    continue;
                }
                if (s_.substr(i_, 2) == "<!") fail("doctype and CDATA sections are not supported");
                if (s_.substr(i_, 2) == "<?") fail("processing instruction inside element content");
                children.push_back(parse_element());
                continue;
            }
            raw_text.push_back(s_[i_++]);
        }
    }

    // Element-mapping rule: attributes become "@" keys, repeated sibling names
    // become a sequence, text-only content becomes a Text leaf ("#text" when
    // attributes are present). Edge whitespace of leaf text is trimmed before
    // entity decoding.
    Value finish_element(Mapping attrs, std::string_view raw_text,
                         std::vector<std::pair<std::string, Value>> children) {
        std::string_view text = raw_text;
        while (!text.empty() && is_xml_ws(text.front())) text.remove_prefix(1);
        while (!text.empty() && is_xml_ws(text.back())) text.remove_suffix(1);

        if (children.empty()) {
            std::string decoded = decode_entities(text);
            if (attrs.empty()) return Value::text(std::move(decoded));
            Mapping members = std::move(attrs);
            if (!decoded.empty()) members.push_back({"#text", Value::text(std::move(decoded))});
            return Value::mapping(std::move(members));
        }
        if (!text.empty()) fail("mixed text and element content is not supported");

        Mapping members = std::move(attrs);
        for (auto& [child_name, child_value] : children) {
            auto it = std::find_if(members.begin(), members.end(),
                                   [&](const Member& m) { return m.key == child_name; });
            if (it == members.end()) {
                members.push_back({child_name, std::move(child_value)});
                continue;
            }
            if (it->value.kind() != Value::Kind::Sequence) {
                Sequence seq;
                seq.push_back(std::move(it->value));
                it->value = Value::sequence(std::move(seq));
            }
            Sequence seq = it->value.items();
            seq.push_back(std::move(child_value));
            it->value = Value::sequence(std::move(seq));
        }
        return Value::mapping(std::move(members));
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

void encode_text(std::string& out, std::string_view s, bool attribute) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        char c = s[k];
        bool edge = (k == 0 || k + 1 == s.size());
        switch (c) {
            case '&': out += "&amp;"; continue;
            case '<': out += "&lt;"; continue;
            case '>': out += "&gt;"; continue;
            case '"':
                if (attribute) {
                    out += "&quot;";
                    continue;
                }
                break;
            case ' ':
                // Leaf text is edge-trimmed on parse, so significant edge
                // spaces go through numeric references.
                if (!attribute && edge) {
                    out += "&#32;";
                    continue;
                }
                break;
            case '\n':
            case '\r':
            case '\t': {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "&#%d;", c);
                out += buf;
                continue;
            }
            default:
                if (static_cast<unsigned char>(c) < 0x20)
                    throw UnrepresentableValue("control character has no XML encoding");
        }
        out.push_back(c);
    }
}

void write_element(std::string& out, const std::string& name, const Value& v);

void write_child(std::string& out, const std::string& name, const Value& v) {
    if (v.kind() == Value::Kind::Sequence) {
        for (const auto& item : v.items()) {
            if (item.kind() == Value::Kind::Sequence)
                throw UnrepresentableValue("nested sequences have no XML encoding");
            write_element(out, name, item);
        }
        return;
    }
    write_element(out, name, v);
}

void write_element(std::string& out, const std::string& name, const Value& v) {
    if (!is_xml_name(name))
        throw UnrepresentableValue("'" + name + "' is not a valid XML element name");
    out.push_back('<');
    out += name;

    std::string text;
    bool has_text = false;
    std::vector<const Member*> children;
    if (v.kind() == Value::Kind::Mapping) {
        for (const auto& m : v.members()) {
            if (!m.key.empty() && m.key.front() == '@') {
                std::string attr_name = m.key.substr(1);
                if (!is_xml_name(attr_name))
                    throw UnrepresentableValue("'" + attr_name + "' is not a valid attribute name");
                if (!m.value.is_scalar())
                    throw UnrepresentableValue("attribute '" + attr_name + "' must be a scalar");
                out.push_back(' ');
                out += attr_name;
                out += "=\"";
                encode_text(out, canonical_scalar_text(m.value), /*attribute=*/true);
                out.push_back('"');
            } else if (m.key == "#text") {
                if (!m.value.is_scalar())
                    throw UnrepresentableValue("'#text' must be a scalar");
                text = canonical_scalar_text(m.value);
                has_text = true;
            } else {
                children.push_back(&m);
            }
        }
        if (has_text && !children.empty())
            throw UnrepresentableValue("mixed text and element content has no XML encoding");
    } else if (v.kind() == Value::Kind::Sequence) {
        throw UnrepresentableValue("a sequence needs an enclosing element name");
    } else {
        text = canonical_scalar_text(v);
        has_text = true;
    }

    if (!has_text && children.empty()) {
        out += "/>";
        return;
    }
    if (has_text && text.empty() && children.empty()) {
        out += "/>";
        return;
    }
    out.push_back('>');
    if (has_text) {
        encode_text(out, text, /*attribute=*/false);
    } else {
        for (const Member* m : children) write_child(out, m->key, m->value);
    }
    out += "</";
    out += name;
    out.push_back('>');
}

}  // namespace

Value parse_xml(std::string_view input) { return XmlParser(input).parse_document(); }

std::string serialize_xml(const Value& v) {
    if (v.kind() != Value::Kind::Mapping || v.members().size() != 1)
        throw UnrepresentableValue("XML document root must be a single-key mapping");
    std::string out;
    write_element(out, v.members().front().key, v.members().front().value);
    return out;
}

}  // namespace toonbench::formats::detail
