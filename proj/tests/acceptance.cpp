// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
//   C1 score-composition reproduction on published aggregate means
//   C2 EES anchors and monotonicity
//   C3 gamma crossing between the JSON and TOON aggregate pairs
//   C4 TOON round-trip over 10^4 random documents
//   C5 TOON vs compact-JSON size on uniform tables
//   C6 Wilcoxon exact method vs brute-force enumeration
//   C7 replay pipeline determinism + committed goldens (spawns the CLI)
//   C8 gamma 0/1 degenerate identities on the fixture summary

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "generators.hpp"
#include "toonbench/config.hpp"
#include "toonbench/harness.hpp"

using namespace toonbench;
namespace hn = toonbench::harness;

namespace {

const std::filesystem::path kFixtures = TB_FIXTURE_DIR;
const std::filesystem::path kGolden = TB_GOLDEN_DIR;
const std::string kCli = TB_CLI_PATH;

int failures = 0;

struct Criterion {
    const char* id;
    const char* label;
    double budget_s;
    bool (*fn)(std::string& detail);
};

bool approx(double x, double target, double tol) { return std::fabs(x - target) <= tol; }

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<<unreadable:" + path.string() + ">>";
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- C1 -------------------------------------------------------------------

bool c1_table_reproduction(std::string& detail) {
    const auto w = scoring::ScoreWeights::make(0.2, 0.8, 0.5);
    const double gcs_json = scoring::gcs(0.990, 0.802, w);
    const double gcs_toon = scoring::gcs(0.630, 0.484, w);
    const double env_json = scoring::gcs_env(gcs_json, 0.926, 0.5);
    const double env_toon = scoring::gcs_env(gcs_toon, 0.980, 0.5);
    std::ostringstream os;
    os << "GCS " << gcs_json << "/" << gcs_toon << " GCSenv " << env_json << "/" << env_toon;
    detail = os.str();
    return approx(gcs_json, 0.840, 0.002) && approx(gcs_toon, 0.513, 0.002) &&
           approx(env_json, 0.883, 0.002) && approx(env_toon, 0.747, 0.002);
}

// --- C2 -------------------------------------------------------------------

bool c2_ees_anchors(std::string& detail) {
    const double x_ref = sustain::kDefaultXRef;
    if (sustain::ees(0.0, x_ref) != 1.0) {
        detail = "ees(0) != 1";
        return false;
    }
    if (sustain::ees(x_ref, x_ref) != 0.5) {
        detail = "ees(x_ref) != 0.5";
        return false;
    }
    std::mt19937_64 rng(171717);
    std::uniform_real_distribution<double> dist(0.0, 0.05);
    for (int i = 0; i < 10000; ++i) {
        double a = dist(rng), b = dist(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        const double ea = sustain::ees(a, x_ref);
        const double eb = sustain::ees(b, x_ref);
        if (!(ea > eb) || ea > 1.0 || eb <= 0.0) {
            detail = "monotonicity violated at x=" + std::to_string(a);
            return false;
        }
    }
    detail = "anchors exact, 10^4 monotone draws";
    return true;
}

// --- C3 -------------------------------------------------------------------

bool c3_gamma_crossing(std::string& detail) {
    const auto w = scoring::ScoreWeights::make(0.2, 0.8, 0.5);
    const double g1 = scoring::gcs(0.990, 0.802, w);   // JSON aggregate
    const double g2 = scoring::gcs(0.630, 0.484, w);   // TOON aggregate
    const double e1 = 0.926, e2 = 0.980;
    const auto crossing = scoring::crossing_gamma(g1, e1, g2, e2);
    if (!crossing) {
        detail = "no crossing found";
        return false;
    }
    int sign_changes = 0;
    const int steps = 2001;
    double prev = 0.0;
    bool have_prev = false;
    for (int i = 0; i < steps; ++i) {
        const double gamma = static_cast<double>(i) / (steps - 1);
        const double diff =
            scoring::gcs_env(g1, e1, gamma) - scoring::gcs_env(g2, e2, gamma);
        if (diff == 0.0) continue;
        if (have_prev && (prev > 0) != (diff > 0)) ++sign_changes;
        prev = diff;
        have_prev = true;
    }
    std::ostringstream os;
    os << "gamma* = " << *crossing << ", sign changes = " << sign_changes;
    detail = os.str();
    // TOON overtakes only in the high-gamma regime: exactly one crossing
    return approx(*crossing, 0.858, 0.005) && sign_changes == 1;
}

// --- C4 -------------------------------------------------------------------

bool c4_round_trip(std::string& detail) {
    tbtest::Rng rng(46290481);
    for (int i = 0; i < 10000; ++i) {
        const Value doc = tbtest::random_document(rng);
        std::string text;
        try {
            text = toon::serialize(doc);
            const Value back = toon::parse(text);
            if (!normalized_equal(back, doc)) {
                detail = "mismatch at iteration " + std::to_string(i) + ":\n" + text;
                return false;
            }
        } catch (const std::exception& e) {
            detail = "exception at iteration " + std::to_string(i) + ": " + e.what();
            return false;
        }
    }
    detail = "10^4 documents, zero failures";
    return true;
}

// --- C5 -------------------------------------------------------------------

bool c5_compactness(std::string& detail) {
    tbtest::Rng rng(55555);
    std::vector<double> reductions;
    for (int i = 0; i < 200; ++i) {
        const Value table =
            tbtest::random_uniform_table(rng, tbtest::pick(rng, 2, 20), tbtest::pick(rng, 2, 8));
        const double toon_len =
            static_cast<double>(formats::serialize_format(table, formats::FormatKind::Toon).size());
        const double json_len =
            static_cast<double>(formats::serialize_format(table, formats::FormatKind::Json).size());
        if (!(toon_len < json_len)) {
            detail = "TOON not smaller at iteration " + std::to_string(i);
            return false;
        }
        reductions.push_back(1.0 - toon_len / json_len);
    }
    std::sort(reductions.begin(), reductions.end());
    const double median =
        (reductions[99] + reductions[100]) / 2.0;
    std::ostringstream os;
    os << "200/200 smaller, median reduction " << median * 100.0 << "%";
    detail = os.str();
    return median >= 0.20;
}

// --- C6 -------------------------------------------------------------------

struct BruteWilcoxon {
    double w_plus = 0, w_minus = 0, p = 1;
};

BruteWilcoxon brute_wilcoxon(const std::vector<double>& diffs) {
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
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    BruteWilcoxon out;
    for (std::size_t k = 0; k < n; ++k) (d[k] > 0 ? out.w_plus : out.w_minus) += rank[k];
    std::uint64_t below = 0, above = 0;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (1ULL << k)) w += rank[k];
        if (w <= out.w_plus) ++below;
        if (w >= out.w_plus) ++above;
    }
    out.p = std::min(1.0, 2.0 * static_cast<double>(std::min(below, above)) /
                              static_cast<double>(total));
    return out;
}

bool c6_wilcoxon_oracle(std::string& detail) {
    {
        std::vector<stats::PairedSample> pairs;
        for (int i = 1; i <= 5; ++i) pairs.push_back({"i" + std::to_string(i), double(i), 0.0});
        const auto r = stats::wilcoxon_signed_rank(pairs);
        if (r.w_statistic != 0.0 || r.p_value != 0.0625 ||
            r.method != stats::WilcoxonMethod::Exact) {
            detail = "d=[1..5] expected W=0 p=0.0625, got W=" + std::to_string(r.w_statistic) +
                     " p=" + std::to_string(r.p_value);
            return false;
        }
    }
    std::mt19937_64 rng(60606);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> value(-5, 5);
    int checked = 0;
    for (int iter = 0; iter < 500; ++iter) {
        const int n = size(rng);
        std::vector<double> diffs;
        for (int k = 0; k < n; ++k) diffs.push_back(value(rng));
        if (std::all_of(diffs.begin(), diffs.end(), [](double x) { return x == 0.0; })) continue;
        std::vector<stats::PairedSample> pairs;
        for (std::size_t k = 0; k < diffs.size(); ++k)
            pairs.push_back({"i" + std::to_string(k), diffs[k], 0.0});
        const auto got = stats::wilcoxon_signed_rank(pairs);
        const auto expected = brute_wilcoxon(diffs);
        if (got.w_plus != expected.w_plus || got.w_minus != expected.w_minus ||
            got.p_value != expected.p) {
            detail = "divergence at iteration " + std::to_string(iter);
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " samples identical (W and p)";
    return checked >= 450;
}

// --- C7 -------------------------------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool run_pipeline(const std::filesystem::path& dir, std::string& detail) {
    std::filesystem::create_directories(dir);
    const std::string corpus = (kFixtures / "corpus.jsonl").string();
    if (run_cli("run --corpus " + corpus + " --config " + (kFixtures / "config.json").string() +
                " --backend replay --replay-file " + (kFixtures / "replay.jsonl").string() +
                " --out " + (dir / "records.jsonl").string()) != 0) {
        detail = "run failed in " + dir.string();
        return false;
    }
    if (run_cli("score --records " + (dir / "records.jsonl").string() + " --corpus " + corpus +
                " --out " + (dir / "score").string()) != 0) {
        detail = "score failed in " + dir.string();
        return false;
    }
    if (run_cli("report --scored " + (dir / "score" / "scored.jsonl").string() + " --out " +
                (dir / "report").string()) != 0) {
        detail = "report failed in " + dir.string();
        return false;
    }
    return true;
}

bool c7_replay_determinism(std::string& detail) {
    const auto base = std::filesystem::temp_directory_path() /
                      ("toonbench-acceptance-" + std::to_string(::getpid()));
    std::filesystem::remove_all(base);
    const auto a = base / "a";
    const auto b = base / "b";
    if (!run_pipeline(a, detail) || !run_pipeline(b, detail)) return false;

    const std::pair<std::filesystem::path, std::filesystem::path> checks[] = {
        {a / "records.jsonl", b / "records.jsonl"},
        {a / "score" / "scored.jsonl", b / "score" / "scored.jsonl"},
        {a / "score" / "summary.csv", b / "score" / "summary.csv"},
        {a / "report" / "summary.csv", b / "report" / "summary.csv"},
        {a / "report" / "pairs.csv", b / "report" / "pairs.csv"},
        {a / "report" / "gamma_sweep.csv", b / "report" / "gamma_sweep.csv"},
    };
    for (const auto& [left, right] : checks) {
        if (slurp(left) != slurp(right)) {
            detail = "runs differ: " + left.string();
            return false;
        }
    }
    const std::pair<std::filesystem::path, std::filesystem::path> goldens[] = {
        {a / "records.jsonl", kGolden / "records.jsonl"},
        {a / "score" / "scored.jsonl", kGolden / "scored.jsonl"},
        {a / "score" / "summary.csv", kGolden / "summary.csv"},
        {a / "report" / "summary.csv", kGolden / "summary.csv"},
        {a / "report" / "pairs.csv", kGolden / "pairs.csv"},
        {a / "report" / "gamma_sweep.csv", kGolden / "gamma_sweep.csv"},
    };
    for (const auto& [produced, golden] : goldens) {
        if (slurp(produced) != slurp(golden)) {
            detail = "golden mismatch: " + golden.string() + " vs " + produced.string();
            return false;
        }
    }
    detail = "two pipelines byte-identical and equal to goldens";
    return true;
}

// --- C8 -------------------------------------------------------------------

bool c8_degenerate_weights(std::string& detail) {
    const auto corpus = hn::load_corpus(kFixtures / "corpus.jsonl");
    hn::ReplayBackend backend(kFixtures / "replay.jsonl");
    hn::RunOptions options;
    options.model_id = "fixture-model";
    options.formats = {formats::FormatKind::Json, formats::FormatKind::Xml,
                       formats::FormatKind::Yaml, formats::FormatKind::Toon};
    const auto records = hn::run_paired(corpus, backend, options);

    hn::ScoreOptions score;
    score.emission.mode = sustain::EmissionMode::Measured;

    score.weights = scoring::ScoreWeights::make(0.2, 0.8, 0.0);
    for (const auto& s : hn::score_records(records, corpus, score)) {
        if (s.degenerate) continue;
        if (*s.scores.gcs_env != s.scores.gcs) {
            detail = "gamma=0: gcs_env != gcs on " + s.record.instance_id;
            return false;
        }
    }
    score.weights = scoring::ScoreWeights::make(0.2, 0.8, 1.0);
    for (const auto& s : hn::score_records(records, corpus, score)) {
        if (s.degenerate) continue;
        if (*s.scores.gcs_env != *s.scores.ees) {
            detail = "gamma=1: gcs_env != ees on " + s.record.instance_id;
            return false;
        }
    }

    // the same identity must hold column-wise on the fixture summary
    const auto base = std::filesystem::temp_directory_path() /
                      ("toonbench-acceptance-c8-" + std::to_string(::getpid()));
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);
    auto summary_columns = [&](double gamma, const char* name) {
        hn::ScoreOptions opt;
        opt.emission.mode = sustain::EmissionMode::Measured;
        opt.weights = scoring::ScoreWeights::make(0.2, 0.8, gamma);
        hn::write_summary(hn::score_records(records, corpus, opt), base / name);
        std::map<std::string, std::map<std::string, std::string>> cols;  // format -> metric -> mean
        std::ifstream in(base / name);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string model, format, metric, n, mean, sd;
            std::getline(ss, model, ',');
            std::getline(ss, format, ',');
            std::getline(ss, metric, ',');
            std::getline(ss, n, ',');
            std::getline(ss, mean, ',');
            std::getline(ss, sd, ',');
            cols[format][metric] = mean;
        }
        return cols;
    };
    const auto at0 = summary_columns(0.0, "summary-g0.csv");
    const auto at1 = summary_columns(1.0, "summary-g1.csv");
    for (const auto& [format, metrics] : at0) {
        if (metrics.at("gcs_env") != metrics.at("gcs")) {
            detail = "summary gamma=0 mismatch for " + format;
            return false;
        }
    }
    for (const auto& [format, metrics] : at1) {
        if (metrics.at("gcs_env") != metrics.at("ees")) {
            detail = "summary gamma=1 mismatch for " + format;
            return false;
        }
    }
    detail = "per-record and summary-level identities exact";
    return true;
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"C1", "score composition reproduces published aggregates", 1.0, c1_table_reproduction},
        {"C2", "EES anchors exact and monotone", 1.0, c2_ees_anchors},
        {"C3", "gamma crossing at 0.858 with one sign change", 1.0, c3_gamma_crossing},
        {"C4", "TOON round-trip over 10^4 random documents", 30.0, c4_round_trip},
        {"C5", "TOON beats compact JSON on uniform tables", 5.0, c5_compactness},
        {"C6", "Wilcoxon exact method equals enumeration", 60.0, c6_wilcoxon_oracle},
        {"C7", "replay pipeline deterministic and golden-stable", 10.0, c7_replay_determinism},
        {"C8", "gamma 0/1 degenerate identities on the fixture summary", 1.0, c8_degenerate_weights},
    };

    for (const auto& criterion : criteria) {
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.fn(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.budget_s) {
            ok = false;
            detail += " [over budget: " + std::to_string(elapsed) + "s]";
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion.id << " " << criterion.label;
        if (!detail.empty()) std::cout << " — " << detail;
        std::cout << " (" << elapsed << "s)\n";
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
