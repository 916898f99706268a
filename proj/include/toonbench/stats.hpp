#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace toonbench::stats {

class EmptyInput : public std::runtime_error {
public:
    EmptyInput() : std::runtime_error("statistic undefined on empty input") {}
};

class AllZeroDifferences : public std::runtime_error {
public:
    AllZeroDifferences()
        : std::runtime_error("all paired differences are zero; significance undefined") {}
};

/// Arithmetic mean and sample standard deviation (n-1 denominator; 0 for a
/// single element). Throws EmptyInput.
std::pair<double, double> mean_std(const std::vector<double>& xs);

struct PairedSample {
    std::string instance_id;
    double value_a = 0.0;
    double value_b = 0.0;
};

enum class WilcoxonMethod { Exact, NormalApprox };

struct WilcoxonResult {
    std::size_t n_effective = 0;   // pairs left after zero-difference removal
    std::size_t zeros_dropped = 0;
    double w_plus = 0.0;
    double w_minus = 0.0;
    double w_statistic = 0.0;      // min(w_plus, w_minus)
    double p_value = 1.0;          // two-sided
    WilcoxonMethod method = WilcoxonMethod::Exact;
};

/// Two-sided Wilcoxon signed-rank test on d_i = value_a - value_b. Zeros are
/// dropped (classic handling; the count is reported), |d| ranked with average
/// ranks on ties. Exact sign-assignment distribution for n_effective <= 25
/// (dynamic program over doubled ranks, so ties stay exact); otherwise the
/// normal approximation with tie correction and 0.5 continuity correction.
/// Throws EmptyInput / AllZeroDifferences.
WilcoxonResult wilcoxon_signed_rank(const std::vector<PairedSample>& pairs);

/// Exact/approx switch point exposed for tests.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

}  // namespace toonbench::stats
