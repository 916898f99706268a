#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "toonbench/stats.hpp"

using namespace toonbench::stats;

namespace {

std::vector<PairedSample> pairs_from_diffs(const std::vector<double>& diffs) {
    std::vector<PairedSample> pairs;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        pairs.push_back({"i" + std::to_string(i), diffs[i], 0.0});
    return pairs;
}

// Independent oracle: full enumeration over every sign vector, with the same
// average-rank handling. Mirrors nothing of the library's DP.
struct BruteResult {
    double w_plus, w_minus, w, p;
};

BruteResult brute_force_wilcoxon(const std::vector<double>& diffs) {
    std::vector<double> d;
    for (double x : diffs)
        if (x != 0.0) d.push_back(x);
    const std::size_t n = d.size();
    std::vector<double> abs_d(n);
    std::transform(d.begin(), d.end(), abs_d.begin(), [](double x) { return std::fabs(x); });

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t k = 0; k < n; ++k) (d[k] > 0 ? w_plus : w_minus) += rank[k];

    std::uint64_t below = 0, above = 0;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (1ULL << k)) w += rank[k];
        if (w <= w_plus) ++below;
        if (w >= w_plus) ++above;
    }
    const double tail = static_cast<double>(std::min(below, above)) / static_cast<double>(total);
    return {w_plus, w_minus, std::min(w_plus, w_minus), std::min(1.0, 2.0 * tail)};
}

}  // namespace

TEST_CASE("mean and sample standard deviation") {
    auto [m1, s1] = mean_std({1, 2, 3});
    CHECK(m1 == doctest::Approx(2.0));
    CHECK(s1 == doctest::Approx(1.0));

    auto [m2, s2] = mean_std({5});
    CHECK(m2 == doctest::Approx(5.0));
    CHECK(s2 == doctest::Approx(0.0));

    auto [m3, s3] = mean_std({0.8, 0.9, 1.0, 0.7});
    CHECK(m3 == doctest::Approx(0.85));
    CHECK(s3 == doctest::Approx(0.12909944487358055).epsilon(1e-12));

    CHECK_THROWS_AS(mean_std({}), EmptyInput);
}

TEST_CASE("monotone positive differences give the smallest statistic") {
    auto result = wilcoxon_signed_rank(pairs_from_diffs({1, 2, 3, 4, 5}));
    CHECK(result.n_effective == 5);
    CHECK(result.w_minus == doctest::Approx(0.0));
    CHECK(result.w_statistic == doctest::Approx(0.0));
    CHECK(result.method == WilcoxonMethod::Exact);
    CHECK(result.p_value == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("perfect symmetry with tied ranks is insignificant") {
    auto result = wilcoxon_signed_rank(pairs_from_diffs({1, -1}));
    CHECK(result.w_plus == doctest::Approx(1.5));
    CHECK(result.w_minus == doctest::Approx(1.5));
    CHECK(result.p_value == doctest::Approx(1.0));
}

TEST_CASE("zero differences are dropped and reported") {
    auto result = wilcoxon_signed_rank(pairs_from_diffs({0, 1, 0, 2, 3, 4, 5}));
    CHECK(result.n_effective == 5);
    CHECK(result.zeros_dropped == 2);
    CHECK(result.p_value == doctest::Approx(0.0625).epsilon(1e-12));

    CHECK_THROWS_AS(wilcoxon_signed_rank(pairs_from_diffs({0, 0, 0})), AllZeroDifferences);
    CHECK_THROWS_AS(wilcoxon_signed_rank({}), EmptyInput);
}

TEST_CASE("exact method matches brute-force enumeration") {
    std::mt19937_64 rng(20251120);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> value(-6, 6);  // small range forces ties
    int checked = 0;
    for (int iter = 0; iter < 500; ++iter) {
        const int n = size(rng);
        std::vector<double> diffs;
        for (int k = 0; k < n; ++k) diffs.push_back(static_cast<double>(value(rng)));
        if (std::all_of(diffs.begin(), diffs.end(), [](double d) { return d == 0.0; })) continue;

        auto expected = brute_force_wilcoxon(diffs);
        auto got = wilcoxon_signed_rank(pairs_from_diffs(diffs));
        CHECK(got.w_plus == expected.w_plus);
        CHECK(got.w_minus == expected.w_minus);
        CHECK(got.w_statistic == expected.w);
        CHECK(got.p_value == expected.p);
        ++checked;
    }
    CHECK(checked > 450);
}

TEST_CASE("antisymmetry: swapping the samples swaps the rank sums") {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<PairedSample> fwd, rev;
        for (int k = 0; k < 10; ++k) {
            const double a = dist(rng), b = dist(rng);
            fwd.push_back({"i" + std::to_string(k), a, b});
            rev.push_back({"i" + std::to_string(k), b, a});
        }
        WilcoxonResult f, r;
        try {
            f = wilcoxon_signed_rank(fwd);
            r = wilcoxon_signed_rank(rev);
        } catch (const AllZeroDifferences&) {
            continue;
        }
        CHECK(f.p_value == doctest::Approx(r.p_value).epsilon(1e-12));
        CHECK(f.w_plus == doctest::Approx(r.w_minus));
        CHECK(f.w_minus == doctest::Approx(r.w_plus));
    }
}

TEST_CASE("p is invariant under positive scaling of all differences") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.001, 1000.0);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<double> diffs;
        for (int k = 0; k < 12; ++k) diffs.push_back(dist(rng));
        const double s = scale(rng);
        std::vector<double> scaled(diffs);
        for (double& d : scaled) d *= s;
        auto a = wilcoxon_signed_rank(pairs_from_diffs(diffs));
        auto b = wilcoxon_signed_rank(pairs_from_diffs(scaled));
        CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
        CHECK(a.w_statistic == doctest::Approx(b.w_statistic));
    }
}

TEST_CASE("normal approximation tracks the exact tail at n = 20") {
    std::mt19937_64 rng(5678);
    std::normal_distribution<double> noise(0.15, 1.0);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> diffs;
        for (int k = 0; k < 20; ++k) diffs.push_back(noise(rng));
        auto exact = wilcoxon_signed_rank(pairs_from_diffs(diffs));
        REQUIRE(exact.method == WilcoxonMethod::Exact);

        // recompute through the approximation by inflating the sample size
        // threshold: compare against the same ranks via a 26-element batch is
        // not possible, so check the documented sanity band directly
        const double n = 20.0;
        const double mu = n * (n + 1.0) / 4.0;
        const double sd = std::sqrt(n * (n + 1.0) * (2.0 * n + 1.0) / 24.0);
        const double z = (exact.w_statistic - mu + 0.5) / sd;
        const double approx_p = std::min(1.0, 2.0 * 0.5 * std::erfc(-z / std::sqrt(2.0)));
        CHECK(std::fabs(exact.p_value - approx_p) < 0.03);
    }
}

TEST_CASE("large samples switch to the normal approximation") {
    std::vector<double> diffs;
    std::mt19937_64 rng(31415);
    std::normal_distribution<double> noise(0.4, 1.0);
    for (int k = 0; k < 40; ++k) diffs.push_back(noise(rng));
    auto result = wilcoxon_signed_rank(pairs_from_diffs(diffs));
    CHECK(result.method == WilcoxonMethod::NormalApprox);
    CHECK(result.p_value >= 0.0);
    CHECK(result.p_value <= 1.0);
}
