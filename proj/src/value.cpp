#include "toonbench/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace toonbench {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Scans a JSON number starting at `pos`; returns one-past-the-end or npos on
// mismatch.
std::size_t scan_json_number(std::string_view s, std::size_t pos) {
    std::size_t i = pos;
    if (i < s.size() && s[i] == '-') ++i;
    if (i >= s.size() || !is_digit(s[i])) return std::string_view::npos;
    if (s[i] == '0') {
        ++i;
    } else {
        while (i < s.size() && is_digit(s[i])) ++i;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size() || !is_digit(s[i])) return std::string_view::npos;
        while (i < s.size() && is_digit(s[i])) ++i;
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        if (i >= s.size() || !is_digit(s[i])) return std::string_view::npos;
        while (i < s.size() && is_digit(s[i])) ++i;
    }
    return i;
}

}  // namespace

bool is_json_number(std::string_view text) {
    if (text.empty()) return false;
    return scan_json_number(text, 0) == text.size();
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
    if (!is_json_number(text)) return std::nullopt;
    return Decimal(std::string(text));
}

Decimal Decimal::from_text(std::string_view text) {
    auto d = parse(text);
    if (!d) throw std::invalid_argument("not a valid number: '" + std::string(text) + "'");
    return *d;
}

Decimal Decimal::from_int(std::int64_t v) { return Decimal(std::to_string(v)); }
Decimal Decimal::from_uint(std::uint64_t v) { return Decimal(std::to_string(v)); }

Decimal Decimal::from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite number");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return Decimal(std::string(buf, res.ptr));
}

Decimal::Decimal(std::string text) : text_(std::move(text)) { normalize(); }

void Decimal::normalize() {
    std::string_view s = text_;
    std::size_t i = 0;
    negative_ = false;
    if (s[i] == '-') {
        negative_ = true;
        ++i;
    }
    std::string digits;
    while (i < s.size() && is_digit(s[i])) digits.push_back(s[i++]);
    long long frac_len = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) {
            digits.push_back(s[i++]);
            ++frac_len;
        }
    }
    long long exp = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (s[i] == '+' || s[i] == '-') exp_neg = (s[i++] == '-');
        while (i < s.size() && is_digit(s[i])) exp = exp * 10 + (s[i++] - '0');
        if (exp_neg) exp = -exp;
    }
    exponent_ = exp - frac_len;

    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) {
        // zero: canonical key regardless of sign or lexeme
        negative_ = false;
        digits_.clear();
        exponent_ = 0;
        return;
    }
    std::size_t last = digits.find_last_not_of('0');
    exponent_ += static_cast<long long>(digits.size() - 1 - last);
    digits_ = digits.substr(first, last - first + 1);
}

bool Decimal::is_integral() const { return digits_.empty() || exponent_ >= 0; }

bool Decimal::equals(const Decimal& other) const {
    return negative_ == other.negative_ && exponent_ == other.exponent_ &&
           digits_ == other.digits_;
}

// ---------------------------------------------------------------------------
// Value

Value Value::null() { return Value(Storage(std::monostate{})); }
Value Value::boolean(bool v) { return Value(Storage(v)); }
Value Value::number(Decimal v) { return Value(Storage(std::move(v))); }
Value Value::number(std::int64_t v) { return Value(Storage(Decimal::from_int(v))); }
Value Value::text(std::string v) { return Value(Storage(std::move(v))); }
Value Value::sequence(Sequence items) { return Value(Storage(std::move(items))); }

Value Value::mapping(Mapping members) {
    std::unordered_set<std::string_view> seen;
    for (const auto& m : members) {
        if (!seen.insert(m.key).second)
            throw std::invalid_argument("duplicate mapping key: '" + m.key + "'");
    }
    return Value(Storage(std::move(members)));
}

Value::Kind Value::kind() const {
    return static_cast<Kind>(data_.index());
}

bool Value::is_scalar() const {
    switch (kind()) {
        case Kind::Null:
        case Kind::Bool:
        case Kind::Number:
        case Kind::Text:
            return true;
        default:
            return false;
    }
}

bool Value::empty_container() const {
    if (kind() == Kind::Sequence) return items().empty();
    if (kind() == Kind::Mapping) return members().empty();
    return false;
}

bool Value::as_bool() const {
    if (kind() != Kind::Bool) throw std::logic_error("value is not a bool");
    return std::get<bool>(data_);
}

const Decimal& Value::as_number() const {
    if (kind() != Kind::Number) throw std::logic_error("value is not a number");
    return std::get<Decimal>(data_);
}

const std::string& Value::as_text() const {
    if (kind() != Kind::Text) throw std::logic_error("value is not text");
    return std::get<std::string>(data_);
}

const Sequence& Value::items() const {
    if (kind() != Kind::Sequence) throw std::logic_error("value is not a sequence");
    return std::get<Sequence>(data_);
}

const Mapping& Value::members() const {
    if (kind() != Kind::Mapping) throw std::logic_error("value is not a mapping");
    return std::get<Mapping>(data_);
}

const Value* Value::find(std::string_view key) const {
    if (kind() != Kind::Mapping) return nullptr;
    for (const auto& m : members())
        if (m.key == key) return &m.value;
    return nullptr;
}

// ---------------------------------------------------------------------------
// KeyPath

PathSegment PathSegment::map_key(std::string k) {
    PathSegment s;
    s.kind = Kind::Key;
    s.key = std::move(k);
    return s;
}

PathSegment PathSegment::seq_index(std::size_t i) {
    PathSegment s;
    s.kind = Kind::Index;
    s.index = i;
    return s;
}

bool operator==(const PathSegment& a, const PathSegment& b) {
    if (a.kind != b.kind) return false;
    return a.kind == PathSegment::Kind::Key ? a.key == b.key : a.index == b.index;
}

namespace {

bool path_key_needs_quotes(std::string_view k) {
    if (k.empty()) return true;
    for (char c : k) {
        bool bare = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || is_digit(c) ||
                    c == '_' || c == '-';
        if (!bare) return true;
    }
    return false;
}

void append_quoted(std::string& out, std::string_view s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
}

// Parses a double-quoted segment starting at s[i] == '"'. Returns the decoded
// text and advances i past the closing quote, or nullopt on malformed input.
std::optional<std::string> take_quoted(std::string_view s, std::size_t& i) {
    std::string out;
    ++i;  // opening quote
    while (i < s.size()) {
        char c = s[i];
        if (c == '"') {
            ++i;
            return out;
        }
        if (c == '\\') {
            if (i + 1 >= s.size()) return std::nullopt;
            char e = s[i + 1];
            switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 't': out.push_back('\t'); break;
                default: return std::nullopt;
            }
            i += 2;
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return std::nullopt;
}

}  // namespace

std::string KeyPath::to_string() const {
    if (segments_.empty()) return "<root>";
    std::string out;
    bool first = true;
    for (const auto& seg : segments_) {
        if (seg.kind == PathSegment::Kind::Index) {
            out.push_back('[');
            out += std::to_string(seg.index);
            out.push_back(']');
        } else {
            if (!first) out.push_back('.');
            if (path_key_needs_quotes(seg.key)) {
                append_quoted(out, seg.key);
            } else {
                out += seg.key;
            }
        }
        first = false;
    }
    return out;
}

std::optional<KeyPath> KeyPath::parse(std::string_view text) {
    if (text == "<root>") return KeyPath{};
    if (text.empty()) return std::nullopt;
    KeyPath path;
    std::size_t i = 0;
    bool expect_dot = false;
    while (i < text.size()) {
        char c = text[i];
        if (c == '[') {
            std::size_t j = text.find(']', i);
            if (j == std::string_view::npos || j == i + 1) return std::nullopt;
            std::size_t idx = 0;
            auto digits = text.substr(i + 1, j - i - 1);
            for (char d : digits) {
                if (!is_digit(d)) return std::nullopt;
                idx = idx * 10 + static_cast<std::size_t>(d - '0');
            }
            path.push(PathSegment::seq_index(idx));
            i = j + 1;
            expect_dot = true;
            continue;
        }
        if (expect_dot) {
            if (c != '.') return std::nullopt;
            ++i;
            if (i >= text.size()) return std::nullopt;
            c = text[i];
        }
        if (c == '"') {
            auto key = take_quoted(text, i);
            if (!key) return std::nullopt;
            path.push(PathSegment::map_key(std::move(*key)));
        } else {
            std::size_t start = i;
            while (i < text.size() && text[i] != '.' && text[i] != '[') ++i;
            auto key = text.substr(start, i - start);
            if (key.empty() || path_key_needs_quotes(key)) return std::nullopt;
            path.push(PathSegment::map_key(std::string(key)));
        }
        expect_dot = true;
    }
    return path;
}

// ---------------------------------------------------------------------------
// flatten / normalized_equal

namespace {

void flatten_into(const Value& v, KeyPath& path, std::vector<Leaf>& out) {
    switch (v.kind()) {
        case Value::Kind::Sequence: {
            const auto& items = v.items();
            if (items.empty()) {
                out.push_back({path, v});
                return;
            }
            for (std::size_t i = 0; i < items.size(); ++i) {
                path.push(PathSegment::seq_index(i));
                flatten_into(items[i], path, out);
                auto segs = path.segments();
                segs.pop_back();
                path = KeyPath(std::move(segs));
            }
            return;
        }
        case Value::Kind::Mapping: {
            const auto& members = v.members();
            if (members.empty()) {
                out.push_back({path, v});
                return;
            }
            for (const auto& m : members) {
                path.push(PathSegment::map_key(m.key));
                flatten_into(m.value, path, out);
                auto segs = path.segments();
                segs.pop_back();
                path = KeyPath(std::move(segs));
            }
            return;
        }
        default:
            out.push_back({path, v});
    }
}

}  // namespace

std::vector<Leaf> flatten(const Value& v) {
    std::vector<Leaf> out;
    KeyPath path;
    flatten_into(v, path, out);
    return out;
}

bool normalized_equal(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Value::Kind::Null:
            return true;
        case Value::Kind::Bool:
            return a.as_bool() == b.as_bool();
        case Value::Kind::Number:
            return a.as_number().equals(b.as_number());
        case Value::Kind::Text:
            return a.as_text() == b.as_text();
        case Value::Kind::Sequence: {
            const auto& xs = a.items();
            const auto& ys = b.items();
            if (xs.size() != ys.size()) return false;
            for (std::size_t i = 0; i < xs.size(); ++i)
                if (!normalized_equal(xs[i], ys[i])) return false;
            return true;
        }
        case Value::Kind::Mapping: {
            const auto& xs = a.members();
            if (xs.size() != b.members().size()) return false;
            for (const auto& m : xs) {
                const Value* other = b.find(m.key);
                if (!other || !normalized_equal(m.value, *other)) return false;
            }
            return true;
        }
    }
    return false;
}

std::string canonical_scalar_text(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Null:
            return "null";
        case Value::Kind::Bool:
            return v.as_bool() ? "true" : "false";
        case Value::Kind::Number:
            return v.as_number().text();
        case Value::Kind::Text:
            return v.as_text();
        default:
            throw std::logic_error("canonical_scalar_text on a container");
    }
}

}  // namespace toonbench
