#include "toonbench/sustainability.hpp"

namespace toonbench::sustain {

double estimate_ce(const DecodeMeasurement& m, const EmissionConfig& cfg) {
    if (cfg.mode == EmissionMode::TokenFactor) {
        if (cfg.token_factor <= 0.0)
            throw MissingMeasurement("token_factor must be positive in TokenFactor mode");
        return (static_cast<double>(m.n_tokens) / 1000.0) * cfg.token_factor;
    }
    if (m.ce_kg) return *m.ce_kg;
    if (m.energy_kwh) {
        if (cfg.grid_intensity <= 0.0)
            throw MissingMeasurement("grid_intensity must be positive to convert energy");
        return *m.energy_kwh * cfg.grid_intensity;
    }
    throw MissingMeasurement("Measured mode needs ce_kg or energy_kwh");
}

double carbon_intensity(double ce_kg, long n_tokens) {
    if (n_tokens <= 0) throw ZeroTokens();
    return 1000.0 * ce_kg / static_cast<double>(n_tokens);
}

double ees(double x, double x_ref) {
    return 1.0 / (1.0 + x / x_ref);
}

}  // namespace toonbench::sustain
