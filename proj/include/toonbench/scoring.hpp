#pragma once

#include <optional>
#include <vector>

#include "toonbench/formats.hpp"
#include "toonbench/value.hpp"

namespace toonbench::scoring {

// Default correctness weighting (alpha, beta) and sustainability weight gamma.
inline constexpr double kDefaultAlpha = 0.2;
inline constexpr double kDefaultBeta = 0.8;
inline constexpr double kDefaultGamma = 0.5;

struct ScoreWeights {
    double alpha = kDefaultAlpha;
    double beta = kDefaultBeta;
    double gamma = kDefaultGamma;

    /// Throws std::invalid_argument unless alpha, beta, gamma are in [0,1]
    /// and alpha + beta == 1 within 1e-12.
    static ScoreWeights make(double alpha, double beta, double gamma);
};

struct ScoreBundle {
    int render = 0;                        // {0,1}
    double syntax = 0.0;                   // [0,1]
    double gcs = 0.0;                      // alpha*render + beta*syntax
    std::optional<double> x_intensity;     // kgCO2e per 1000 tokens; absent when degenerate
    std::optional<double> ees;             // (0,1]
    std::optional<double> gcs_env;         // (1-gamma)*gcs + gamma*ees
};

/// 1 iff `output` parses under `format` (strict TOON validation for Toon).
int render_score(std::string_view output, formats::FormatKind format);

struct SyntaxOptions {
    /// Match on path presence only, ignoring values.
    bool keys_only = false;
};

/// Fraction of expected flattened pairs satisfied by the parsed output; 0 on
/// parse failure. Value matching is normalized_equal, except XML where
/// expected scalars compare via their canonical string rendering.
double syntax_score(std::string_view output, formats::FormatKind format, const Value& expected,
                    const SyntaxOptions& options = {});

/// alpha*render + beta*syntax. Per-record render is {0,1}; aggregate means
/// pass through the same composition.
double gcs(double render, double syntax, const ScoreWeights& w);
double gcs_env(double gcs_value, double ees_value, double gamma);

/// gcs_env evaluated at gamma = i/(steps-1), i = 0..steps-1. steps >= 2.
std::vector<std::pair<double, double>> gamma_sweep(double gcs_value, double ees_value, int steps);

/// Gamma where two (gcs, ees) score pairs swap order:
/// (1-g)g1 + g*e1 = (1-g)g2 + g*e2. nullopt when the lines are parallel
/// (incl. identical) or the crossing falls outside [0,1].
std::optional<double> crossing_gamma(double gcs_a, double ees_a, double gcs_b, double ees_b);

}  // namespace toonbench::scoring
