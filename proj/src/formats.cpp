#include "toonbench/formats.hpp"

#include "format_impl.hpp"

namespace toonbench::formats {

std::string_view format_name(FormatKind f) {
    switch (f) {
        case FormatKind::Json: return "json";
        case FormatKind::Xml: return "xml";
        case FormatKind::Yaml: return "yaml";
        case FormatKind::Toon: return "toon";
    }
    return "unknown";
}

std::optional<FormatKind> format_from_name(std::string_view name) {
    if (name == "json") return FormatKind::Json;
    if (name == "xml") return FormatKind::Xml;
    if (name == "yaml") return FormatKind::Yaml;
    if (name == "toon") return FormatKind::Toon;
    return std::nullopt;
}

AdapterError::AdapterError(FormatKind format, std::optional<int> line, const std::string& message)
    : std::runtime_error(std::string(format_name(format)) +
                         (line ? " line " + std::to_string(*line) : std::string()) + ": " + message),
      format_(format),
      line_(line) {}

Value parse_format(std::string_view input, FormatKind format) {
    switch (format) {
        case FormatKind::Json:
            return detail::parse_json(input);
        case FormatKind::Xml:
            return detail::parse_xml(input);
        case FormatKind::Yaml:
            return detail::parse_yaml(input);
        case FormatKind::Toon:
            try {
                return toon::parse(input);
            } catch (const toon::ToonError& e) {
                throw AdapterError(FormatKind::Toon, e.line(), e.what());
            }
    }
    throw std::logic_error("unknown format");
}

std::string serialize_format(const Value& v, FormatKind format) {
    switch (format) {
        case FormatKind::Json:
            return detail::serialize_json(v);
        case FormatKind::Xml:
            return detail::serialize_xml(v);
        case FormatKind::Yaml:
            return detail::serialize_yaml(v);
        case FormatKind::Toon:
            return toon::serialize(v);
    }
    throw std::logic_error("unknown format");
}

}  // namespace toonbench::formats
