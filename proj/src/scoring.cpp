#include "toonbench/scoring.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace toonbench::scoring {

ScoreWeights ScoreWeights::make(double alpha, double beta, double gamma) {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma))
        throw std::invalid_argument("score weights must lie in [0,1]");
    if (std::fabs(alpha + beta - 1.0) > 1e-12)
        throw std::invalid_argument("alpha + beta must equal 1");
    return ScoreWeights{alpha, beta, gamma};
}

int render_score(std::string_view output, formats::FormatKind format) {
    try {
        formats::parse_format(output, format);
        return 1;
    } catch (const formats::AdapterError&) {
        return 0;
    }
}

double syntax_score(std::string_view output, formats::FormatKind format, const Value& expected,
                    const SyntaxOptions& options) {
    Value parsed;
    try {
        parsed = formats::parse_format(output, format);
    } catch (const formats::AdapterError&) {
        return 0.0;
    }

    const std::vector<Leaf> expected_leaves = flatten(expected);
    if (expected_leaves.empty()) return 0.0;

    std::unordered_map<std::string, const Value*> generated;
    const std::vector<Leaf> generated_leaves = flatten(parsed);
    generated.reserve(generated_leaves.size());
    for (const auto& leaf : generated_leaves) generated.emplace(leaf.path.to_string(), &leaf.value);

    std::size_t satisfied = 0;
    for (const auto& leaf : expected_leaves) {
        auto it = generated.find(leaf.path.to_string());
        if (it == generated.end()) continue;
        if (options.keys_only) {
            ++satisfied;
            continue;
        }
        bool match = false;
        if (format == formats::FormatKind::Xml) {
            // XML has no native scalar types: compare the canonical renderings.
            const Value& got = *it->second;
            if (leaf.value.is_scalar() && got.is_scalar())
                match = canonical_scalar_text(leaf.value) == canonical_scalar_text(got);
        } else {
            match = normalized_equal(leaf.value, *it->second);
        }
        if (match) ++satisfied;
    }
    return static_cast<double>(satisfied) / static_cast<double>(expected_leaves.size());
}

double gcs(double render, double syntax, const ScoreWeights& w) {
    return w.alpha * render + w.beta * syntax;
}

double gcs_env(double gcs_value, double ees_value, double gamma) {
    return (1.0 - gamma) * gcs_value + gamma * ees_value;
}

std::vector<std::pair<double, double>> gamma_sweep(double gcs_value, double ees_value, int steps) {
    if (steps < 2) throw std::invalid_argument("gamma sweep needs at least 2 steps");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        double gamma = static_cast<double>(i) / static_cast<double>(steps - 1);
        out.emplace_back(gamma, gcs_env(gcs_value, ees_value, gamma));
    }
    return out;
}

std::optional<double> crossing_gamma(double gcs_a, double ees_a, double gcs_b, double ees_b) {
    const double num = gcs_a - gcs_b;
    const double den = (gcs_a - gcs_b) + (ees_b - ees_a);
    if (den == 0.0) return std::nullopt;
    const double gamma = num / den;
    if (gamma < 0.0 || gamma > 1.0) return std::nullopt;
    return gamma;
}

}  // namespace toonbench::scoring
