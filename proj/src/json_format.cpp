#include <cstdio>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "format_impl.hpp"
#include "toonbench/formats.hpp"

namespace toonbench::formats::detail {

namespace {

// SAX handler building a Value tree. Going through SAX instead of the DOM
// keeps member order and the raw lexeme of every float, so "0.1" and "1.00"
// survive a round trip untouched.
class SaxBuilder {
public:
    using number_integer_t = std::int64_t;
    using number_unsigned_t = std::uint64_t;
    using number_float_t = double;
    using string_t = std::string;
    using binary_t = nlohmann::json::binary_t;

    bool null() { return emit(Value::null()); }
    bool boolean(bool v) { return emit(Value::boolean(v)); }
    bool number_integer(number_integer_t v) { return emit(Value::number(Decimal::from_int(v))); }
    bool number_unsigned(number_unsigned_t v) { return emit(Value::number(Decimal::from_uint(v))); }

    bool number_float(number_float_t, const string_t& raw) {
        auto d = Decimal::parse(raw);
        if (!d) return fail("unrepresentable number literal");
        return emit(Value::number(std::move(*d)));
    }

    bool string(string_t& v) { return emit(Value::text(v)); }
    bool binary(binary_t&) { return fail("binary values are not JSON"); }

    bool start_object(std::size_t) {
        stack_.emplace_back();
        stack_.back().kind = Frame::Kind::Object;
        return true;
    }

    bool key(string_t& k) {
        Frame& f = stack_.back();
        for (const auto& m : f.members)
            if (m.key == k) return fail("duplicate member name '" + k + "'");
        f.pending_key = k;
        return true;
    }

    bool end_object() {
        Value v = Value::mapping(std::move(stack_.back().members));
        stack_.pop_back();
        return emit(std::move(v));
    }

    bool start_array(std::size_t) {
        stack_.emplace_back();
        stack_.back().kind = Frame::Kind::Array;
        return true;
    }

    bool end_array() {
        Value v = Value::sequence(std::move(stack_.back().items));
        stack_.pop_back();
        return emit(std::move(v));
    }

    bool parse_error(std::size_t position, const std::string&,
                     const nlohmann::detail::exception& ex) {
        error_ = ex.what();
        error_position_ = position;
        return false;
    }

    Value take_root() { return std::move(root_); }
    const std::string& error() const { return error_; }
    std::size_t error_position() const { return error_position_; }

private:
    struct Frame {
        enum class Kind { Object, Array };
        Kind kind = Kind::Object;
        Mapping members;
        Sequence items;
        std::string pending_key;
    };

    bool fail(const std::string& msg) {
        error_ = msg;
        return false;
    }

    bool emit(Value v) {
        if (stack_.empty()) {
            root_ = std::move(v);
            return true;
        }
        Frame& f = stack_.back();
        if (f.kind == Frame::Kind::Object) {
            f.members.push_back({std::move(f.pending_key), std::move(v)});
        } else {
            f.items.push_back(std::move(v));
        }
        return true;
    }

    std::vector<Frame> stack_;
    Value root_;
    std::string error_;
    std::size_t error_position_ = 0;
};

int line_of_offset(std::string_view input, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < input.size(); ++i)
        if (input[i] == '\n') ++line;
    return line;
}

void write_json_string(std::string& out, std::string_view s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
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
}

void write_json_value(std::string& out, const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Null:
            out += "null";
            return;
        case Value::Kind::Bool:
            out += v.as_bool() ? "true" : "false";
            return;
        case Value::Kind::Number:
            out += v.as_number().text();
            return;
        case Value::Kind::Text:
            write_json_string(out, v.as_text());
            return;
        case Value::Kind::Sequence: {
            out.push_back('[');
            const auto& items = v.items();
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out.push_back(',');
                write_json_value(out, items[i]);
            }
            out.push_back(']');
            return;
        }
        case Value::Kind::Mapping: {
            out.push_back('{');
            const auto& members = v.members();
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (i) out.push_back(',');
                write_json_string(out, members[i].key);
                out.push_back(':');
                write_json_value(out, members[i].value);
            }
            out.push_back('}');
            return;
        }
    }
}

}  // namespace

Value parse_json(std::string_view input) {
    SaxBuilder builder;
    bool ok = nlohmann::json::sax_parse(input, &builder, nlohmann::json::input_format_t::json,
                                        /*strict=*/true);
    if (!ok) {
        std::optional<int> line;
        if (builder.error_position() > 0) line = line_of_offset(input, builder.error_position());
        throw AdapterError(FormatKind::Json, line,
                           builder.error().empty() ? "invalid JSON" : builder.error());
    }
    return builder.take_root();
}

std::string serialize_json(const Value& v) {
    std::string out;
    write_json_value(out, v);
    return out;
}

}  // namespace toonbench::formats::detail
