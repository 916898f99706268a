#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace toonbench {

/// Exact decimal number. Keeps the lexeme it was parsed from (so "1.0" and
/// "0.1" re-serialize byte-exactly) plus a normalized (sign, digits, exponent)
/// key for exact rational comparison. 1 and 1.0 differ textually but compare
/// equal.
class Decimal {
public:
    /// Parses a JSON-grammar number. Returns nullopt if `text` is not a full
    /// match of the grammar.
    static std::optional<Decimal> parse(std::string_view text);
    /// Like parse(), but throws std::invalid_argument on malformed input.
    static Decimal from_text(std::string_view text);
    static Decimal from_int(std::int64_t v);
    static Decimal from_uint(std::uint64_t v);
    /// Shortest round-trip rendering of `v`. Throws on non-finite input.
    /// Note the integral/fractional distinction of the source double is not
    /// recoverable: from_double(1.0) renders as "1".
    static Decimal from_double(double v);

    const std::string& text() const { return text_; }
    /// True when the value is a mathematical integer (1.0 counts).
    bool is_integral() const;
    /// Exact rational-value equality; -0 equals 0.
    bool equals(const Decimal& other) const;

    friend bool operator==(const Decimal& a, const Decimal& b) { return a.equals(b); }

private:
    explicit Decimal(std::string text);
    void normalize();

    std::string text_;
    bool negative_ = false;
    std::string digits_;   // significant digits, no edge zeros; empty means zero
    long long exponent_ = 0;
};

/// True iff `text` fully matches the JSON number grammar.
bool is_json_number(std::string_view text);

class Value;
struct Member;

using Sequence = std::vector<Value>;
using Mapping = std::vector<Member>;  // order-preserving, unique keys

/// Canonical structured value shared by every codec and the scorer.
/// Mappings preserve insertion order so serializers are deterministic;
/// equality (normalized_equal) ignores that order.
class Value {
public:
    enum class Kind { Null, Bool, Number, Text, Sequence, Mapping };

    Value() : data_(std::monostate{}) {}

    static Value null();
    static Value boolean(bool v);
    static Value number(Decimal v);
    static Value number(std::int64_t v);
    static Value text(std::string v);
    static Value sequence(Sequence items);
    /// Throws std::invalid_argument when two members share a key.
    static Value mapping(Mapping members);

    Kind kind() const;
    bool is_null() const { return kind() == Kind::Null; }
    bool is_scalar() const;
    bool is_container() const { return !is_scalar(); }
    bool empty_container() const;

    bool as_bool() const;
    const Decimal& as_number() const;
    const std::string& as_text() const;
    const Sequence& items() const;
    const Mapping& members() const;

    /// Mapping lookup by key; nullptr when absent (or not a mapping).
    const Value* find(std::string_view key) const;

private:
    using Storage = std::variant<std::monostate, bool, Decimal, std::string, Sequence, Mapping>;
    explicit Value(Storage s) : data_(std::move(s)) {}
    Storage data_;
};

struct Member {
    std::string key;
    Value value;
};

/// One step of a KeyPath: a mapping key or a sequence index.
struct PathSegment {
    enum class Kind { Key, Index };

    static PathSegment map_key(std::string k);
    static PathSegment seq_index(std::size_t i);

    Kind kind = Kind::Key;
    std::string key;
    std::size_t index = 0;

    friend bool operator==(const PathSegment& a, const PathSegment& b);
};

/// Path from the root to a leaf. Renders as dotted keys with bracketed
/// indices ("a.b[0].c"); keys that would collide with that syntax are
/// double-quoted with backslash escapes, and the empty path renders as
/// "<root>". to_string/parse round-trip.
class KeyPath {
public:
    KeyPath() = default;
    explicit KeyPath(std::vector<PathSegment> segments) : segments_(std::move(segments)) {}

    void push(PathSegment s) { segments_.push_back(std::move(s)); }
    bool empty() const { return segments_.empty(); }
    std::size_t size() const { return segments_.size(); }
    const std::vector<PathSegment>& segments() const { return segments_; }

    std::string to_string() const;
    static std::optional<KeyPath> parse(std::string_view text);

    friend bool operator==(const KeyPath& a, const KeyPath& b) {
        return a.segments_ == b.segments_;
    }

private:
    std::vector<PathSegment> segments_;
};

/// A flattened leaf: path plus either a scalar or an empty container (the
/// sentinel that keeps structure-only content countable).
struct Leaf {
    KeyPath path;
    Value value;
};

/// Every leaf scalar with its full path, in traversal order. Empty mappings
/// and sequences contribute one entry whose value is the empty container
/// itself; a scalar root contributes a single entry with the empty path.
std::vector<Leaf> flatten(const Value& v);

/// Structural equality after normalization: mapping order ignored, numbers by
/// exact rational value, text exact. Total function.
bool normalized_equal(const Value& a, const Value& b);

/// Canonical text of a scalar: "null", "true"/"false", the number lexeme, or
/// the text itself. Throws std::logic_error on containers.
std::string canonical_scalar_text(const Value& v);

}  // namespace toonbench
