#pragma once

// Internal adapter entry points shared between the per-format translation
// units and the dispatch in formats.cpp.

#include <string>
#include <string_view>

#include "toonbench/value.hpp"

namespace toonbench::formats::detail {

Value parse_json(std::string_view input);
std::string serialize_json(const Value& v);

Value parse_xml(std::string_view input);
std::string serialize_xml(const Value& v);

Value parse_yaml(std::string_view input);
std::string serialize_yaml(const Value& v);

}  // namespace toonbench::formats::detail
