// toonbench: batch evaluation of structured LLM output with carbon-aware
// scoring, plus standalone codec utilities (convert, validate).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "toonbench/config.hpp"
#include "toonbench/harness.hpp"

namespace tb = toonbench;
namespace hn = toonbench::harness;

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

std::vector<tb::formats::FormatKind> parse_format_list(const std::string& csv) {
    std::vector<tb::formats::FormatKind> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        auto kind = tb::formats::format_from_name(token);
        if (!kind) throw hn::ConfigError("unknown format '" + token + "'");
        out.push_back(*kind);
    }
    if (out.empty()) throw hn::ConfigError("empty format list");
    return out;
}

std::string read_stdin() {
    std::stringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
}

struct RunArgs {
    std::string corpus;
    std::string config;
    std::string backend = "replay";
    std::string replay_file;
    std::string formats = "json,xml,yaml,toon";
    std::string out;
    std::string model_override;
    bool no_strip_fences = false;
};

int cmd_run(const RunArgs& args) {
    hn::RunConfig cfg;
    std::vector<hn::TaskInstance> corpus;
    std::vector<tb::formats::FormatKind> formats;
    try {
        if (args.backend == "replay" && args.replay_file.empty())
            throw hn::ConfigError("--backend replay requires --replay-file");
        if (!args.config.empty()) cfg = hn::load_config(args.config);
        if (!args.model_override.empty()) cfg.model_id = args.model_override;
        if (args.no_strip_fences) cfg.strip_fences = false;
        formats = parse_format_list(args.formats);
        corpus = hn::load_corpus(args.corpus);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        hn::OutputLock lock(args.out);
        std::unique_ptr<hn::Backend> backend;
        if (args.backend == "replay") {
            backend = std::make_unique<hn::ReplayBackend>(args.replay_file);
        } else {
            hn::LiveBackendConfig live;
            live.base_url = cfg.backend_url;
            live.model_id = cfg.model_id;
            live.temperature = cfg.temperature;
            live.max_attempts = cfg.max_retries;
            if (const char* key = std::getenv(cfg.api_key_env.c_str())) live.api_key = key;
            backend = std::make_unique<hn::LiveBackend>(std::move(live));
        }

        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw hn::IoError("cannot write '" + args.out + "'");
        hn::RunOptions options;
        options.model_id = cfg.model_id;
        options.formats = formats;
        options.strip_fences = cfg.strip_fences;
        options.parallelism = cfg.parallelism;
        options.templates = cfg.templates;
        std::size_t written = 0;
        hn::run_paired(corpus, *backend, options, [&](const hn::GenerationRecord& rec) {
            out << hn::record_to_jsonl(rec) << '\n';
            out.flush();
            ++written;
        });
        std::cout << "wrote " << written << " records to " << args.out << "\n";
        return kOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsageError;
    } catch (const hn::LockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

struct ScoreArgs {
    std::string records;
    std::string corpus;
    std::string config;
    double alpha = tb::scoring::kDefaultAlpha;
    double beta = tb::scoring::kDefaultBeta;
    double gamma = tb::scoring::kDefaultGamma;
    double xref = tb::sustain::kDefaultXRef;
    std::string out;
    bool keys_only = false;
};

int cmd_score(const ScoreArgs& args) {
    hn::ScoreOptions options;
    std::vector<hn::GenerationRecord> records;
    std::vector<hn::TaskInstance> corpus;
    try {
        hn::RunConfig cfg;
        if (!args.config.empty()) cfg = hn::load_config(args.config);
        options.weights = tb::scoring::ScoreWeights::make(args.alpha, args.beta, args.gamma);
        options.emission = cfg.emission;
        if (args.xref <= 0.0) throw hn::ConfigError("--xref must be positive");
        options.emission.x_ref = args.xref;
        options.keys_only = args.keys_only;
        records = hn::read_records(args.records);
        corpus = hn::load_corpus(args.corpus);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        std::filesystem::create_directories(args.out);
        hn::OutputLock lock(args.out);
        auto scored = hn::score_records(records, corpus, options);
        hn::write_scored(std::filesystem::path(args.out) / "scored.jsonl", scored);
        hn::write_summary(scored, std::filesystem::path(args.out) / "summary.csv");
        std::cout << "scored " << scored.size() << " records into " << args.out << "\n";
        return kOk;
    } catch (const hn::UnknownInstance& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsageError;
    } catch (const tb::sustain::MissingMeasurement& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsageError;
    } catch (const hn::LockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

struct CompareArgs {
    std::string scored;
    std::string format_a;
    std::string format_b;
    std::string metric = "gcs";
    std::string out;
};

int cmd_compare(const CompareArgs& args) {
    try {
        auto scored = hn::read_scored(args.scored);
        auto fa = tb::formats::format_from_name(args.format_a);
        auto fb = tb::formats::format_from_name(args.format_b);
        auto metric = hn::metric_from_name(args.metric);
        if (!fa || !fb || !metric) {
            std::cerr << "config error: unknown format or metric\n";
            return kUsageError;
        }

        std::vector<std::string> models;
        for (const auto& s : scored)
            if (std::find(models.begin(), models.end(), s.record.model_id) == models.end())
                models.push_back(s.record.model_id);
        std::sort(models.begin(), models.end());

        std::vector<hn::PairedComparison> comparisons;
        for (const auto& model : models) {
            std::vector<hn::ScoredRecord> subset;
            for (const auto& s : scored)
                if (s.record.model_id == model) subset.push_back(s);
            comparisons.push_back(hn::compare_formats(subset, *fa, *fb, *metric));
        }

        if (!args.out.empty()) {
            hn::write_pairs(comparisons, args.out);
        } else {
            for (const auto& cmp : comparisons) {
                std::cout << cmp.model_id << " " << tb::formats::format_name(cmp.format_a)
                          << " vs " << tb::formats::format_name(cmp.format_b) << " on "
                          << hn::metric_name(cmp.metric) << ": mean_a=" << cmp.mean_a
                          << " mean_b=" << cmp.mean_b << " n_pairs=" << cmp.samples.size();
                if (cmp.all_zero) {
                    std::cout << " -> no difference (all paired differences are zero)\n";
                } else {
                    const auto& w = *cmp.wilcoxon;
                    std::cout << " W=" << w.w_statistic << " p=" << w.p_value << " ("
                              << (w.method == tb::stats::WilcoxonMethod::Exact ? "exact" : "normal")
                              << ", n_eff=" << w.n_effective << ")\n";
                }
            }
        }
        return kOk;
    } catch (const hn::RecordFormatError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

struct SweepArgs {
    std::string scored;
    int steps = 11;
    std::string out;
};

int cmd_sweep(const SweepArgs& args) {
    try {
        if (args.steps < 2) {
            std::cerr << "config error: --steps must be >= 2\n";
            return kUsageError;
        }
        auto scored = hn::read_scored(args.scored);
        auto rows = hn::gamma_sweep_table(scored, args.steps);
        if (!args.out.empty()) {
            hn::write_sweep(rows, args.out);
        } else {
            std::cout << "format,gamma,gcs_env\n";
            for (const auto& row : rows)
                std::cout << tb::formats::format_name(row.format) << ',' << row.gamma << ','
                          << row.gcs_env << '\n';
        }
        return kOk;
    } catch (const hn::RecordFormatError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

struct ReportArgs {
    std::string scored;
    std::string out;
    int steps = 11;
};

int cmd_report(const ReportArgs& args) {
    try {
        if (args.steps < 2) {
            std::cerr << "config error: --steps must be >= 2\n";
            return kUsageError;
        }
        auto scored = hn::read_scored(args.scored);

        std::vector<std::string> models;
        for (const auto& s : scored)
            if (std::find(models.begin(), models.end(), s.record.model_id) == models.end())
                models.push_back(s.record.model_id);
        std::sort(models.begin(), models.end());

        const tb::formats::FormatKind all_formats[] = {
            tb::formats::FormatKind::Json, tb::formats::FormatKind::Xml,
            tb::formats::FormatKind::Yaml, tb::formats::FormatKind::Toon};
        const hn::Metric all_metrics[] = {hn::Metric::Gcs,     hn::Metric::Ees,
                                          hn::Metric::GcsEnv,  hn::Metric::NTokens,
                                          hn::Metric::Ce,      hn::Metric::Duration};

        std::vector<hn::PairedComparison> comparisons;
        for (const auto& model : models) {
            std::vector<hn::ScoredRecord> subset;
            std::set<tb::formats::FormatKind> present;
            for (const auto& s : scored) {
                if (s.record.model_id != model) continue;
                subset.push_back(s);
                present.insert(s.record.format);
            }
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t b = a + 1; b < 4; ++b) {
                    if (!present.count(all_formats[a]) || !present.count(all_formats[b])) continue;
                    for (auto metric : all_metrics) {
                        try {
                            comparisons.push_back(
                                hn::compare_formats(subset, all_formats[a], all_formats[b], metric));
                        } catch (const hn::InsufficientPairs& e) {
                            std::cerr << "note: skipping comparison: " << e.what() << "\n";
                        }
                    }
                }
            }
        }

        std::filesystem::create_directories(args.out);
        hn::OutputLock lock(args.out);
        auto sweeps = hn::gamma_sweep_table(scored, args.steps);
        hn::emit_report(scored, comparisons, sweeps, args.out);
        std::cout << "report written to " << args.out << "\n";
        return kOk;
    } catch (const hn::RecordFormatError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsageError;
    } catch (const hn::LockError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_convert(const std::string& from, const std::string& to) {
    auto from_kind = tb::formats::format_from_name(from);
    auto to_kind = tb::formats::format_from_name(to);
    if (!from_kind || !to_kind) {
        std::cerr << "config error: --from/--to must be one of json, xml, yaml, toon\n";
        return kUsageError;
    }
    const std::string input = read_stdin();
    try {
        tb::Value value = tb::formats::parse_format(input, *from_kind);
        std::cout << tb::formats::serialize_format(value, *to_kind);
        return kOk;
    } catch (const tb::formats::AdapterError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const tb::UnrepresentableValue& e) {
        std::cerr << "unrepresentable: " << e.what() << "\n";
        return kUsageError;
    }
}

int cmd_validate(const std::string& format) {
    auto kind = tb::formats::format_from_name(format);
    if (!kind) {
        std::cerr << "config error: unknown format '" << format << "'\n";
        return kUsageError;
    }
    const std::string input = read_stdin();
    if (*kind == tb::formats::FormatKind::Toon) {
        auto result = tb::toon::validate(input);
        if (result.ok) {
            std::cout << "ok\n";
            return kOk;
        }
        std::cerr << result.error->what() << "\n";
        return kRuntimeError;
    }
    try {
        tb::formats::parse_format(input, *kind);
        std::cout << "ok\n";
        return kOk;
    } catch (const tb::formats::AdapterError& e) {
        std::cerr << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured-output benchmark: paired generation runs, TOON/JSON/XML/YAML codecs, "
                 "carbon-aware scoring and paired statistics"};
    app.require_subcommand(1);
    int rc = kOk;

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Execute the paired generation protocol over a corpus");
    run->add_option("--corpus", run_args.corpus, "Task corpus (JSONL)")->required();
    run->add_option("--config", run_args.config, "Harness config (JSON)");
    run->add_option("--backend", run_args.backend, "Backend kind")
        ->check(CLI::IsMember({"replay", "http"}));
    run->add_option("--replay-file", run_args.replay_file, "Record file served in replay mode");
    run->add_option("--formats", run_args.formats, "Comma-separated formats to run");
    run->add_option("--out", run_args.out, "Output record file (JSONL)")->required();
    run->add_option("--model", run_args.model_override, "Override the configured model id");
    run->add_flag("--no-strip-fences", run_args.no_strip_fences,
                  "Keep code fences in completions");
    run->callback([&] { rc = cmd_run(run_args); });

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "Score a record file against its corpus");
    score->add_option("--records", score_args.records, "Record file (JSONL)")->required();
    score->add_option("--corpus", score_args.corpus, "Task corpus (JSONL)")->required();
    score->add_option("--config", score_args.config, "Harness config (JSON), for emission mode");
    score->add_option("--alpha", score_args.alpha, "Render weight");
    score->add_option("--beta", score_args.beta, "Syntax weight");
    score->add_option("--gamma", score_args.gamma, "Sustainability weight");
    score->add_option("--xref", score_args.xref, "Reference emission factor (kgCO2e/1k tokens)");
    score->add_option("--out", score_args.out, "Output directory")->required();
    score->add_flag("--keys-only", score_args.keys_only,
                    "Syntax Score matches key paths only, ignoring values");
    score->callback([&] { rc = cmd_score(score_args); });

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "Paired comparison of two formats on one metric");
    compare->add_option("--scored", compare_args.scored, "Scored file (JSONL)")->required();
    compare->add_option("--format-a", compare_args.format_a, "First format")->required();
    compare->add_option("--format-b", compare_args.format_b, "Second format")->required();
    compare->add_option("--metric", compare_args.metric,
                        "gcs|ees|gcs_env|n_tokens|ce_kg|duration_s");
    compare->add_option("--out", compare_args.out, "Write pairs.csv here instead of stdout");
    compare->callback([&] { rc = cmd_compare(compare_args); });

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Gamma sweep of GCS_env per format");
    sweep->add_option("--scored", sweep_args.scored, "Scored file (JSONL)")->required();
    sweep->add_option("--steps", sweep_args.steps, "Number of gamma steps (>= 2)");
    sweep->add_option("--out", sweep_args.out, "Write gamma_sweep.csv here instead of stdout");
    sweep->callback([&] { rc = cmd_sweep(sweep_args); });

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Summary, paired stats and gamma sweep CSVs");
    report->add_option("--scored", report_args.scored, "Scored file (JSONL)")->required();
    report->add_option("--out", report_args.out, "Output directory")->required();
    report->add_option("--steps", report_args.steps, "Number of gamma steps (>= 2)");
    report->callback([&] { rc = cmd_report(report_args); });

    std::string convert_from, convert_to;
    auto* convert = app.add_subcommand("convert", "Convert stdin between formats");
    convert->add_option("--from", convert_from, "Input format")->required();
    convert->add_option("--to", convert_to, "Output format")->required();
    convert->callback([&] { rc = cmd_convert(convert_from, convert_to); });

    std::string validate_format;
    auto* validate = app.add_subcommand("validate", "Validate stdin under a format's grammar");
    validate->add_option("--format", validate_format, "Format to validate against")->required();
    validate->callback([&] { rc = cmd_validate(validate_format); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    }
    return rc;
}
