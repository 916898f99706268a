#pragma once

#include <optional>
#include <stdexcept>

namespace toonbench::sustain {

/// Reference emission factor: estimated kgCO2e per 1000 generated tokens of a
/// state-of-the-art LLM.
inline constexpr double kDefaultXRef = 0.001719;

enum class EmissionMode { Measured, TokenFactor };

struct EmissionConfig {
    EmissionMode mode = EmissionMode::Measured;
    double token_factor = 0.0;     // kgCO2e per 1000 generated tokens (TokenFactor mode)
    double grid_intensity = 0.0;   // kgCO2e per kWh (Measured mode, energy-only records)
    double x_ref = kDefaultXRef;   // kgCO2e per 1000 tokens
};

/// Decode-phase measurements of one generation: first token to last token.
struct DecodeMeasurement {
    long n_tokens = 0;
    double duration_s = 0.0;
    std::optional<double> energy_kwh;
    std::optional<double> ce_kg;
};

class MissingMeasurement : public std::runtime_error {
public:
    explicit MissingMeasurement(const std::string& what) : std::runtime_error(what) {}
};

class ZeroTokens : public std::runtime_error {
public:
    ZeroTokens() : std::runtime_error("carbon intensity undefined for zero generated tokens") {}
};

/// Measured mode: recorded ce_kg, else energy_kwh * grid_intensity.
/// TokenFactor mode: (n_tokens / 1000) * token_factor.
/// Throws MissingMeasurement when the mode's required field is absent.
double estimate_ce(const DecodeMeasurement& m, const EmissionConfig& cfg);

/// X = 1000 * ce / n_tokens (kgCO2e per 1000 tokens). Throws ZeroTokens.
double carbon_intensity(double ce_kg, long n_tokens);

/// EES = 1 / (1 + x / x_ref), bounded in (0, 1].
double ees(double x, double x_ref);

}  // namespace toonbench::sustain
