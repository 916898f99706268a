#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "toonbench/value.hpp"

namespace toonbench {

/// Thrown by serializers when a value has no encoding in the target format
/// (e.g. an empty mapping key, or a scalar TOON root).
class UnrepresentableValue : public std::runtime_error {
public:
    explicit UnrepresentableValue(const std::string& what) : std::runtime_error(what) {}
};

namespace toon {

/// Serialization/parsing dialect. Defaults follow the format overview:
/// 2-space indent, comma row delimiter.
struct Dialect {
    int indent_width = 2;
    char delimiter = ',';
};

/// Throws std::invalid_argument for unusable dialects (indent_width < 1, or a
/// delimiter that collides with line/quote structure).
void validate_dialect(const Dialect& d);

enum class ErrorKind {
    IndentationError,
    LengthMismatch,
    FieldCountMismatch,
    UnterminatedQuote,
    DuplicateKey,
    MalformedHeader,
};

std::string_view error_kind_name(ErrorKind k);

class ToonError : public std::runtime_error {
public:
    ToonError(ErrorKind kind, int line, const std::string& message);
    ErrorKind kind() const { return kind_; }
    int line() const { return line_; }  // 1-based line in the input

private:
    ErrorKind kind_;
    int line_;
};

struct ParseOptions {
    /// Strict mode enforces declared array lengths, tabular field counts and
    /// sibling-key uniqueness. The scorer always uses strict mode.
    bool strict = true;
};

/// Parses a TOON document into the canonical value. The root is a mapping or
/// sequence; a bare "key: value" document yields the implicit root mapping and
/// empty input yields an empty mapping. CRLF is normalized before parsing.
/// Throws ToonError.
Value parse(std::string_view input, const Dialect& dialect = {},
            const ParseOptions& options = {});

/// Deterministic TOON rendering. Uniform sequences of same-keyed all-scalar
/// mappings emit the tabular form; non-uniform sequences fall back to list
/// form. Throws UnrepresentableValue for scalar roots and empty mapping keys.
std::string serialize(const Value& v, const Dialect& dialect = {});

struct Validation {
    bool ok = false;
    std::optional<ToonError> error;
};

/// Never throws; wraps parse() in strict mode.
Validation validate(std::string_view input, const Dialect& dialect = {});

}  // namespace toon
}  // namespace toonbench
