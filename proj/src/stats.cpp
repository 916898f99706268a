#include "toonbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace toonbench::stats {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) throw EmptyInput();
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Average ranks of |d|, doubled so ties (half-integer ranks) stay integral.
std::vector<long long> doubled_ranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
    std::vector<long long> ranks(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        // doubled average of ranks i+1 .. j+1
        const long long doubled_avg = static_cast<long long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled_avg;
        i = j + 1;
    }
    return ranks;
}

double exact_two_sided_p(const std::vector<long long>& scaled_ranks, long long scaled_w_plus) {
    const std::size_t n = scaled_ranks.size();
    const long long total = std::accumulate(scaled_ranks.begin(), scaled_ranks.end(), 0LL);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
    counts[0] = 1;
    long long reached = 0;
    for (long long r : scaled_ranks) {
        reached += r;
        for (long long s = reached; s >= r; --s)
            counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
    }
    std::uint64_t below = 0, above = 0;
    for (long long s = 0; s <= total; ++s) {
        if (s <= scaled_w_plus) below += counts[static_cast<std::size_t>(s)];
        if (s >= scaled_w_plus) above += counts[static_cast<std::size_t>(s)];
    }
    const double denom = std::ldexp(1.0, static_cast<int>(n));  // 2^n
    const double tail = static_cast<double>(std::min(below, above)) / denom;
    return std::min(1.0, 2.0 * tail);
}

double approx_two_sided_p(const std::vector<long long>& scaled_ranks, double w_statistic) {
    const double n = static_cast<double>(scaled_ranks.size());
    const double mu = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // tie correction: subtract sum(t^3 - t)/48 over tie groups
    std::vector<long long> sorted(scaled_ranks);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        var -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    if (var <= 0.0) return 1.0;
    const double z = (w_statistic - mu + 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * normal_cdf(z));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<PairedSample>& pairs) {
    if (pairs.empty()) throw EmptyInput();

    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    std::size_t zeros = 0;
    for (const auto& p : pairs) {
        const double d = p.value_a - p.value_b;
        if (d == 0.0) {
            ++zeros;
            continue;
        }
        diffs.push_back(d);
    }
    if (diffs.empty()) throw AllZeroDifferences();

    std::vector<double> abs_d(diffs.size());
    std::transform(diffs.begin(), diffs.end(), abs_d.begin(),
                   [](double d) { return std::fabs(d); });
    const std::vector<long long> ranks2 = doubled_ranks(abs_d);

    long long w_plus2 = 0, w_minus2 = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        (diffs[i] > 0.0 ? w_plus2 : w_minus2) += ranks2[i];

    WilcoxonResult result;
    result.n_effective = diffs.size();
    result.zeros_dropped = zeros;
    result.w_plus = static_cast<double>(w_plus2) / 2.0;
    result.w_minus = static_cast<double>(w_minus2) / 2.0;
    result.w_statistic = std::min(result.w_plus, result.w_minus);

    if (diffs.size() <= kWilcoxonExactLimit) {
        result.method = WilcoxonMethod::Exact;
        result.p_value = exact_two_sided_p(ranks2, w_plus2);
    } else {
        result.method = WilcoxonMethod::NormalApprox;
        result.p_value = approx_two_sided_p(ranks2, result.w_statistic);
    }
    return result;
}

}  // namespace toonbench::stats
