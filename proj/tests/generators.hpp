#pragma once

// Seeded random ValueNode generators shared by the property tests and the
// acceptance suite.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "toonbench/value.hpp"

namespace tbtest {

using toonbench::Decimal;
using toonbench::Mapping;
using toonbench::Member;
using toonbench::Sequence;
using toonbench::Value;

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string random_bare_key(Rng& rng) {
    static constexpr char alphabet[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-";
    const int len = pick(rng, 1, 8);
    std::string key;
    for (int i = 0; i < len; ++i)
        key.push_back(alphabet[static_cast<std::size_t>(pick(rng, 0, sizeof(alphabet) - 2))]);
    return key;
}

inline std::string random_text(Rng& rng) {
    static const std::vector<std::string> pool = {
        "",
        "plain",
        "two words",
        "a,b",
        "key: value",
        "true",
        "12",
        "-3.5",
        " padded ",
        "trailing  ",
        "caf\xC3\xA9 au lait",
        "[3]: 1,2",
        "{not,a,table}",
        "- item",
        "line\nbreak",
        "tab\there",
        "quote\"inside",
        "it 's odd",
        "a 'mid' word",
        "back\\slash",
        "'single'",
        "#hash",
        "null",
        "0x1F",
        "1e5",
        "a.b.c",
        "ends:",
    };
    return pool[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(pool.size()) - 1))];
}

inline Value random_scalar(Rng& rng) {
    switch (pick(rng, 0, 5)) {
        case 0: return Value::null();
        case 1: return Value::boolean(pick(rng, 0, 1) == 1);
        case 2: return Value::number(static_cast<std::int64_t>(pick(rng, -100000, 100000)));
        case 3: {
            // exact decimals with a fractional part
            const int mantissa = pick(rng, -99999, 99999);
            const int scale = pick(rng, 1, 4);
            std::string text = std::to_string(mantissa);
            bool negative = text[0] == '-';
            std::string digits = negative ? text.substr(1) : text;
            while (static_cast<int>(digits.size()) <= scale) digits.insert(digits.begin(), '0');
            digits.insert(digits.size() - static_cast<std::size_t>(scale), 1, '.');
            return Value::number(Decimal::from_text((negative ? "-" : "") + digits));
        }
        case 4: return Value::number(Decimal::from_text(std::to_string(pick(rng, 1, 99)) + "e" +
                                                        std::to_string(pick(rng, -3, 6))));
        default: return Value::text(random_text(rng));
    }
}

struct GenOptions {
    int max_depth = 4;
    bool allow_empty_containers = true;
};

inline Value random_value(Rng& rng, int depth, const GenOptions& opt = {});

inline Value random_sequence(Rng& rng, int depth, const GenOptions& opt) {
    const int n = pick(rng, opt.allow_empty_containers ? 0 : 1, 4);
    // bias toward uniform tables so the tabular path gets real coverage
    if (n >= 1 && pick(rng, 0, 2) == 0) {
        const int field_count = pick(rng, 1, 4);
        std::vector<std::string> fields;
        std::set<std::string> seen;
        while (static_cast<int>(fields.size()) < field_count) {
            std::string f = random_bare_key(rng);
            if (seen.insert(f).second) fields.push_back(std::move(f));
        }
        Sequence rows;
        for (int i = 0; i < n; ++i) {
            Mapping row;
            for (const auto& f : fields) row.push_back({f, random_scalar(rng)});
            rows.push_back(Value::mapping(std::move(row)));
        }
        return Value::sequence(std::move(rows));
    }
    Sequence items;
    for (int i = 0; i < n; ++i) items.push_back(random_value(rng, depth + 1, opt));
    return Value::sequence(std::move(items));
}

inline Value random_mapping(Rng& rng, int depth, const GenOptions& opt) {
    const int n = pick(rng, opt.allow_empty_containers ? 0 : 1, 4);
    Mapping members;
    std::set<std::string> seen;
    while (static_cast<int>(members.size()) < n) {
        std::string key = random_bare_key(rng);
        if (!seen.insert(key).second) continue;
        members.push_back({std::move(key), random_value(rng, depth + 1, opt)});
    }
    return Value::mapping(std::move(members));
}

inline Value random_value(Rng& rng, int depth, const GenOptions& opt) {
    if (depth >= opt.max_depth) return random_scalar(rng);
    switch (pick(rng, 0, 3)) {
        case 0: return random_sequence(rng, depth, opt);
        case 1: return random_mapping(rng, depth, opt);
        default: return random_scalar(rng);
    }
}

/// Mapping- or sequence-rooted value, as TOON documents require.
inline Value random_document(Rng& rng, const GenOptions& opt = {}) {
    return pick(rng, 0, 3) == 0 ? random_sequence(rng, 1, opt) : random_mapping(rng, 1, opt);
}

/// Structurally equal clone with every mapping's member order shuffled.
inline Value shuffle_mappings(Rng& rng, const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Sequence: {
            Sequence items;
            for (const auto& item : v.items()) items.push_back(shuffle_mappings(rng, item));
            return Value::sequence(std::move(items));
        }
        case Value::Kind::Mapping: {
            Mapping members;
            for (const auto& m : v.members()) members.push_back({m.key, shuffle_mappings(rng, m.value)});
            std::shuffle(members.begin(), members.end(), rng);
            return Value::mapping(std::move(members));
        }
        default:
            return v;
    }
}

/// Uniform table {key: [n rows x m scalar fields]} for compactness checks.
inline Value random_uniform_table(Rng& rng, int rows, int fields) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    while (static_cast<int>(names.size()) < fields) {
        std::string f = random_bare_key(rng);
        if (seen.insert(f).second) names.push_back(std::move(f));
    }
    Sequence out;
    for (int r = 0; r < rows; ++r) {
        Mapping row;
        for (const auto& f : names) {
            switch (pick(rng, 0, 2)) {
                case 0: row.push_back({f, Value::number(static_cast<std::int64_t>(pick(rng, 0, 100000)))}); break;
                case 1: row.push_back({f, Value::boolean(pick(rng, 0, 1) == 1)}); break;
                default: row.push_back({f, Value::text("item-" + std::to_string(pick(rng, 0, 9999)))});
            }
        }
        out.push_back(Value::mapping(std::move(row)));
    }
    Mapping root;
    root.push_back({random_bare_key(rng), Value::sequence(std::move(out))});
    return Value::mapping(std::move(root));
}

}  // namespace tbtest
