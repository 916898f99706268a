#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "toonbench/toon.hpp"
#include "toonbench/value.hpp"

namespace toonbench::formats {

enum class FormatKind { Json, Xml, Yaml, Toon };

std::string_view format_name(FormatKind f);
std::optional<FormatKind> format_from_name(std::string_view name);

/// Parse failure in any adapter; the scorer maps it to Render Score 0.
class AdapterError : public std::runtime_error {
public:
    AdapterError(FormatKind format, std::optional<int> line, const std::string& message);
    FormatKind format() const { return format_; }
    std::optional<int> line() const { return line_; }

private:
    FormatKind format_;
    std::optional<int> line_;
};

/// Parses `input` under the named format's grammar:
///   Json — RFC 8259 (duplicate member names rejected);
///   Yaml — block-style subset, flow only for the {} / [] empties, no
///          anchors/aliases/tags/block scalars;
///   Xml  — element-mapping rule: element name -> key, repeated siblings ->
///          sequence, attributes -> "@"-prefixed keys, leaf text -> Text;
///   Toon — strict toon::parse.
/// Throws AdapterError.
Value parse_format(std::string_view input, FormatKind format);

/// Deterministic rendering: compact JSON, 2-space block YAML, text-leaf XML,
/// default-dialect TOON. Throws UnrepresentableValue (e.g. XML root that is
/// not a single-key mapping).
std::string serialize_format(const Value& v, FormatKind format);

}  // namespace toonbench::formats
