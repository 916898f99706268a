#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toonbench/backend.hpp"
#include "toonbench/records.hpp"
#include "toonbench/stats.hpp"

namespace toonbench::harness {

class CorpusFormatError : public std::runtime_error {
public:
    CorpusFormatError(int line, const std::string& what)
        : std::runtime_error("corpus line " + std::to_string(line) + ": " + what) {}
};

class DuplicateInstanceId : public std::runtime_error {
public:
    explicit DuplicateInstanceId(const std::string& id)
        : std::runtime_error("duplicate instance_id '" + id + "'") {}
};

class MissingTemplate : public std::runtime_error {
public:
    explicit MissingTemplate(formats::FormatKind format)
        : std::runtime_error("no prompt template for format '" +
                             std::string(formats::format_name(format)) + "'") {}
};

class UnknownInstance : public std::runtime_error {
public:
    explicit UnknownInstance(const std::string& id)
        : std::runtime_error("record references unknown instance_id '" + id + "'") {}
};

class InsufficientPairs : public std::runtime_error {
public:
    explicit InsufficientPairs(const std::string& what) : std::runtime_error(what) {}
};

class LockError : public std::runtime_error {
public:
    explicit LockError(const std::string& what) : std::runtime_error(what) {}
};

/// One generation task: natural-language description plus the expected
/// canonical value.
struct TaskInstance {
    std::string instance_id;
    std::string description;
    Value expected;
    std::vector<formats::FormatKind> formats;
};

/// Line-delimited JSON corpus; fields instance_id, description, expected,
/// formats. Throws CorpusFormatError / DuplicateInstanceId.
std::vector<TaskInstance> load_corpus(const std::filesystem::path& path);

struct PromptTemplate {
    formats::FormatKind format = formats::FormatKind::Json;
    std::string preamble;
    std::string format_rules;             // non-empty for Toon
    std::string body = "Task:\n{description}";  // carries the one {description} slot
};

class TemplateSet {
public:
    static TemplateSet defaults();
    /// Validates the single-slot contract (and non-empty rules for Toon);
    /// throws std::invalid_argument.
    void set(PromptTemplate tpl);
    const PromptTemplate* find(formats::FormatKind format) const;

private:
    std::map<formats::FormatKind, PromptTemplate> templates_;
};

/// Deterministic substitution of the task description into the format's
/// template. Throws MissingTemplate.
std::string build_prompt(const TaskInstance& task, formats::FormatKind format,
                         const TemplateSet& templates);

/// Strips one leading/trailing triple-backtick fence (optional language tag).
/// Returns the stripped body, or nullopt when no fence is present.
std::optional<std::string> strip_code_fence(const std::string& text);

struct RunOptions {
    std::string model_id = "model";
    std::vector<formats::FormatKind> formats;
    bool strip_fences = true;
    int parallelism = 1;
    TemplateSet templates = TemplateSet::defaults();
};

/// Executes the paired protocol: one record per (instance, format), failures
/// flagged rather than dropped. `sink`, when given, receives records in
/// deterministic (instance-major, format-minor) order as they complete.
std::vector<GenerationRecord> run_paired(
    const std::vector<TaskInstance>& corpus, Backend& backend, const RunOptions& options,
    const std::function<void(const GenerationRecord&)>& sink = {});

struct ScoreOptions {
    scoring::ScoreWeights weights;
    sustain::EmissionConfig emission;
    bool keys_only = false;
};

/// Scores every record against its task's expected value. Failed records
/// score render=0, syntax=0; zero-token records are flagged degenerate and
/// carry no EES/GCS_env. Throws UnknownInstance.
std::vector<ScoredRecord> score_records(const std::vector<GenerationRecord>& records,
                                        const std::vector<TaskInstance>& corpus,
                                        const ScoreOptions& options);

enum class Metric { Gcs, Ees, GcsEnv, NTokens, Ce, Duration };

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

struct PairedComparison {
    std::string model_id;
    formats::FormatKind format_a = formats::FormatKind::Json;
    formats::FormatKind format_b = formats::FormatKind::Toon;
    Metric metric = Metric::Gcs;
    std::vector<stats::PairedSample> samples;
    double mean_a = 0.0, std_a = 0.0;
    double mean_b = 0.0, std_b = 0.0;
    std::optional<stats::WilcoxonResult> wilcoxon;  // absent when all differences are zero
    bool all_zero = false;                          // explicit "no difference" outcome
};

/// Pairs records of the two formats by instance_id (excluded pairwise when a
/// side is missing or the metric undefined). Requires a single model_id in
/// `scored`. Throws InsufficientPairs.
PairedComparison compare_formats(const std::vector<ScoredRecord>& scored,
                                 formats::FormatKind format_a, formats::FormatKind format_b,
                                 Metric metric);

struct SweepRow {
    formats::FormatKind format = formats::FormatKind::Json;
    double gamma = 0.0;
    double gcs_env = 0.0;
};

/// Per-format gamma sweep over mean GCS and mean EES of the non-degenerate
/// records. steps >= 2.
std::vector<SweepRow> gamma_sweep_table(const std::vector<ScoredRecord>& scored, int steps);

// Per-file CSV writers (exact headers); all throw IoError.
void write_summary(const std::vector<ScoredRecord>& scored, const std::filesystem::path& csv_path);
void write_pairs(const std::vector<PairedComparison>& comparisons,
                 const std::filesystem::path& csv_path);
void write_sweep(const std::vector<SweepRow>& sweeps, const std::filesystem::path& csv_path);

/// Writes summary.csv, pairs.csv and gamma_sweep.csv into out_dir.
/// Throws IoError.
void emit_report(const std::vector<ScoredRecord>& scored,
                 const std::vector<PairedComparison>& comparisons,
                 const std::vector<SweepRow>& sweeps, const std::filesystem::path& out_dir);

/// The harness is not re-entrant per output target: holds `<target>.lock`
/// exclusively for this process's lifetime. Throws LockError when already
/// held.
class OutputLock {
public:
    explicit OutputLock(const std::filesystem::path& target);
    ~OutputLock();
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    std::filesystem::path lock_path_;
};

}  // namespace toonbench::harness
