#include "toonbench/harness.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <deque>
#include <fstream>
#include <future>
#include <set>

namespace toonbench::harness {

namespace {

std::string now_rfc3339() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

const Value* expect_field(const Value& obj, std::string_view key) { return obj.find(key); }

}  // namespace

// ---------------------------------------------------------------------------
// Corpus

std::vector<TaskInstance> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CorpusFormatError(0, "cannot open '" + path.string() + "'");

    std::vector<TaskInstance> instances;
    std::set<std::string> ids;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        Value row;
        try {
            row = formats::parse_format(line, formats::FormatKind::Json);
        } catch (const formats::AdapterError& e) {
            throw CorpusFormatError(number, e.what());
        }
        if (row.kind() != Value::Kind::Mapping)
            throw CorpusFormatError(number, "expected a JSON object");

        TaskInstance task;
        const Value* id = expect_field(row, "instance_id");
        if (!id || id->kind() != Value::Kind::Text)
            throw CorpusFormatError(number, "instance_id must be a string");
        task.instance_id = id->as_text();

        const Value* description = expect_field(row, "description");
        if (!description || description->kind() != Value::Kind::Text)
            throw CorpusFormatError(number, "description must be a string");
        task.description = description->as_text();

        const Value* expected = expect_field(row, "expected");
        if (!expected || expected->is_null())
            throw CorpusFormatError(number, "expected value must be present and non-null");
        task.expected = *expected;

        const Value* fmts = expect_field(row, "formats");
        if (!fmts || fmts->kind() != Value::Kind::Sequence || fmts->items().empty())
            throw CorpusFormatError(number, "formats must be a non-empty array");
        for (const auto& f : fmts->items()) {
            if (f.kind() != Value::Kind::Text)
                throw CorpusFormatError(number, "formats entries must be strings");
            auto kind = formats::format_from_name(f.as_text());
            if (!kind) throw CorpusFormatError(number, "unknown format '" + f.as_text() + "'");
            task.formats.push_back(*kind);
        }

        if (!ids.insert(task.instance_id).second) throw DuplicateInstanceId(task.instance_id);
        instances.push_back(std::move(task));
    }
    if (instances.empty()) throw CorpusFormatError(number, "corpus holds no instances");
    return instances;
}

// ---------------------------------------------------------------------------
// Prompts

namespace {

constexpr std::string_view kToonRules =
    "TOON format rules:\n"
    "- Indentation is 2 spaces per nesting level; tabs are not allowed.\n"
    "- A key-value pair is written as `key: value` with one space after the colon.\n"
    "- A nested object is written as `key:` with its fields indented one level below.\n"
    "- An array of N primitive values is written inline: `key[N]: v1,v2,v3`.\n"
    "- An array of N objects that share the same scalar fields f1,f2 is written as a\n"
    "  table: `key[N]{f1,f2}:` followed by N indented rows of comma-separated values.\n"
    "- Any other array is written as `key[N]:` followed by N lines starting with `- `.\n"
    "- The declared length [N] must equal the number of elements exactly.\n"
    "- Strings are double-quoted only when they contain a comma, a colon,\n"
    "  leading/trailing spaces, or would otherwise read as a number, true, false or\n"
    "  null. Everything else stays unquoted.\n"
    "- true, false, null and numbers are written unquoted, as in JSON.";

PromptTemplate default_template(formats::FormatKind format) {
    PromptTemplate tpl;
    tpl.format = format;
    const std::string name = [&] {
        switch (format) {
            case formats::FormatKind::Json: return "JSON";
            case formats::FormatKind::Xml: return "XML";
            case formats::FormatKind::Yaml: return "YAML";
            case formats::FormatKind::Toon: return "TOON";
        }
        return "JSON";
    }();
    tpl.preamble = "You are a structured data generator. Produce exactly one " + name +
                   " document that satisfies the task. Output only the " + name +
                   " document, with no commentary, no code fences, and no extra text.";
    if (format == formats::FormatKind::Toon) tpl.format_rules = std::string(kToonRules);
    return tpl;
}

std::size_t count_slots(const std::string& s) {
    std::size_t count = 0;
    for (std::size_t pos = s.find("{description}"); pos != std::string::npos;
         pos = s.find("{description}", pos + 1))
        ++count;
    return count;
}

}  // namespace

TemplateSet TemplateSet::defaults() {
    TemplateSet set;
    for (auto format : {formats::FormatKind::Json, formats::FormatKind::Xml,
                        formats::FormatKind::Yaml, formats::FormatKind::Toon})
        set.set(default_template(format));
    return set;
}

void TemplateSet::set(PromptTemplate tpl) {
    const std::size_t slots =
        count_slots(tpl.preamble) + count_slots(tpl.format_rules) + count_slots(tpl.body);
    if (slots != 1)
        throw std::invalid_argument("template must carry exactly one {description} slot");
    if (tpl.format == formats::FormatKind::Toon && tpl.format_rules.empty())
        throw std::invalid_argument("the TOON template requires non-empty format_rules");
    templates_[tpl.format] = std::move(tpl);
}

const PromptTemplate* TemplateSet::find(formats::FormatKind format) const {
    auto it = templates_.find(format);
    return it == templates_.end() ? nullptr : &it->second;
}

std::string build_prompt(const TaskInstance& task, formats::FormatKind format,
                         const TemplateSet& templates) {
    const PromptTemplate* tpl = templates.find(format);
    if (!tpl) throw MissingTemplate(format);
    std::string text = tpl->preamble;
    if (!tpl->format_rules.empty()) text += "\n\n" + tpl->format_rules;
    text += "\n\n" + tpl->body;
    const std::size_t pos = text.find("{description}");
    text.replace(pos, std::string_view("{description}").size(), task.description);
    return text;
}

std::optional<std::string> strip_code_fence(const std::string& text) {
    std::string_view t = text;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t' || t.front() == '\n' || t.front() == '\r'))
        t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\n' || t.back() == '\r'))
        t.remove_suffix(1);
    if (t.substr(0, 3) != "```" || t.size() < 7) return std::nullopt;
    if (t.substr(t.size() - 3) != "```") return std::nullopt;
    const std::size_t first_nl = t.find('\n');
    if (first_nl == std::string_view::npos) return std::nullopt;
    const std::size_t close = t.rfind("\n```");
    if (close == std::string_view::npos || close < first_nl) return std::nullopt;
    return std::string(t.substr(first_nl + 1, close - first_nl - 1));
}

// ---------------------------------------------------------------------------
// Paired run

std::vector<GenerationRecord> run_paired(
    const std::vector<TaskInstance>& corpus, Backend& backend, const RunOptions& options,
    const std::function<void(const GenerationRecord&)>& sink) {
    if (options.formats.empty()) throw std::invalid_argument("no formats requested");
    if (options.parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
    for (const auto& task : corpus)
        for (auto format : options.formats)
            if (std::find(task.formats.begin(), task.formats.end(), format) == task.formats.end())
                throw std::invalid_argument("instance '" + task.instance_id +
                                            "' does not list format '" +
                                            std::string(formats::format_name(format)) + "'");

    struct Job {
        const TaskInstance* task;
        formats::FormatKind format;
    };
    std::vector<Job> jobs;
    jobs.reserve(corpus.size() * options.formats.size());
    for (const auto& task : corpus)
        for (auto format : options.formats) jobs.push_back({&task, format});

    auto worker = [&](const Job& job) {
        GenerationRecord rec;
        rec.instance_id = job.task->instance_id;
        rec.model_id = options.model_id;
        rec.format = job.format;
        rec.prompt = build_prompt(*job.task, job.format, options.templates);
        BackendResult result = backend.generate(job.task->instance_id, job.format, rec.prompt);
        rec.output_text = std::move(result.text);
        rec.measurement = result.measurement;
        rec.duration_mode = result.duration_mode;
        rec.failed = result.failed;
        if (!rec.failed && options.strip_fences) {
            if (auto stripped = strip_code_fence(rec.output_text)) {
                rec.output_text = std::move(*stripped);
                rec.fence_stripped = true;
            }
        }
        rec.timestamp = result.timestamp ? *result.timestamp : now_rfc3339();
        return rec;
    };

    // Bounded window of in-flight generations; completed records drain in job
    // order so persisted output is deterministic under parallelism.
    std::vector<GenerationRecord> records;
    records.reserve(jobs.size());
    std::deque<std::future<GenerationRecord>> window;
    std::size_t next = 0;
    while (records.size() < jobs.size()) {
        while (next < jobs.size() && window.size() < static_cast<std::size_t>(options.parallelism))
            window.push_back(std::async(std::launch::async, worker, jobs[next++]));
        GenerationRecord rec = window.front().get();
        window.pop_front();
        if (sink) sink(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Scoring

std::vector<ScoredRecord> score_records(const std::vector<GenerationRecord>& records,
                                        const std::vector<TaskInstance>& corpus,
                                        const ScoreOptions& options) {
    std::map<std::string_view, const TaskInstance*> by_id;
    for (const auto& task : corpus) by_id[task.instance_id] = &task;

    std::vector<ScoredRecord> scored;
    scored.reserve(records.size());
    for (const auto& rec : records) {
        auto it = by_id.find(rec.instance_id);
        if (it == by_id.end()) throw UnknownInstance(rec.instance_id);
        const TaskInstance& task = *it->second;

        ScoredRecord s;
        s.record = rec;
        if (!rec.failed) {
            s.scores.render = scoring::render_score(rec.output_text, rec.format);
            s.scores.syntax = scoring::syntax_score(rec.output_text, rec.format, task.expected,
                                                    {.keys_only = options.keys_only});
        }
        s.scores.gcs = scoring::gcs(s.scores.render, s.scores.syntax, options.weights);

        if (rec.measurement.n_tokens == 0) {
            s.degenerate = true;  // EES undefined; excluded from env aggregates
        } else {
            const double ce = sustain::estimate_ce(rec.measurement, options.emission);
            const double x = sustain::carbon_intensity(ce, rec.measurement.n_tokens);
            const double e = sustain::ees(x, options.emission.x_ref);
            s.est_ce_kg = ce;
            s.scores.x_intensity = x;
            s.scores.ees = e;
            s.scores.gcs_env = scoring::gcs_env(s.scores.gcs, e, options.weights.gamma);
        }
        scored.push_back(std::move(s));
    }
    return scored;
}

// ---------------------------------------------------------------------------
// Comparison and report

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::Gcs: return "gcs";
        case Metric::Ees: return "ees";
        case Metric::GcsEnv: return "gcs_env";
        case Metric::NTokens: return "n_tokens";
        case Metric::Ce: return "ce_kg";
        case Metric::Duration: return "duration_s";
    }
    return "unknown";
}

std::optional<Metric> metric_from_name(std::string_view name) {
    for (auto m : {Metric::Gcs, Metric::Ees, Metric::GcsEnv, Metric::NTokens, Metric::Ce,
                   Metric::Duration})
        if (metric_name(m) == name) return m;
    return std::nullopt;
}

namespace {

std::optional<double> metric_value(const ScoredRecord& s, Metric metric) {
    switch (metric) {
        case Metric::Gcs: return s.scores.gcs;
        case Metric::Ees: return s.scores.ees;
        case Metric::GcsEnv: return s.scores.gcs_env;
        case Metric::NTokens: return static_cast<double>(s.record.measurement.n_tokens);
        case Metric::Ce: return s.est_ce_kg;
        case Metric::Duration: return s.record.measurement.duration_s;
    }
    return std::nullopt;
}

}  // namespace

PairedComparison compare_formats(const std::vector<ScoredRecord>& scored,
                                 formats::FormatKind format_a, formats::FormatKind format_b,
                                 Metric metric) {
    std::set<std::string> models;
    for (const auto& s : scored) models.insert(s.record.model_id);
    if (models.size() > 1)
        throw std::invalid_argument("compare_formats expects records of a single model");

    struct Pair {
        std::optional<double> a, b;
    };
    std::vector<std::string> order;
    std::map<std::string, Pair> by_instance;
    for (const auto& s : scored) {
        if (s.record.format != format_a && s.record.format != format_b) continue;
        auto [it, inserted] = by_instance.try_emplace(s.record.instance_id);
        if (inserted) order.push_back(s.record.instance_id);
        auto value = metric_value(s, metric);
        if (s.record.format == format_a) it->second.a = value;
        else it->second.b = value;
    }

    PairedComparison cmp;
    cmp.model_id = models.empty() ? "" : *models.begin();
    cmp.format_a = format_a;
    cmp.format_b = format_b;
    cmp.metric = metric;
    std::vector<double> as, bs;
    for (const auto& id : order) {
        const Pair& p = by_instance[id];
        if (!p.a || !p.b) continue;  // excluded pairwise
        cmp.samples.push_back({id, *p.a, *p.b});
        as.push_back(*p.a);
        bs.push_back(*p.b);
    }
    if (cmp.samples.empty())
        throw InsufficientPairs("no usable pairs for " + std::string(metric_name(metric)) +
                                " between " + std::string(formats::format_name(format_a)) +
                                " and " + std::string(formats::format_name(format_b)));

    std::tie(cmp.mean_a, cmp.std_a) = stats::mean_std(as);
    std::tie(cmp.mean_b, cmp.std_b) = stats::mean_std(bs);
    try {
        cmp.wilcoxon = stats::wilcoxon_signed_rank(cmp.samples);
    } catch (const stats::AllZeroDifferences&) {
        cmp.all_zero = true;  // callers report "no difference" explicitly
    }
    return cmp;
}

std::vector<SweepRow> gamma_sweep_table(const std::vector<ScoredRecord>& scored, int steps) {
    std::vector<SweepRow> rows;
    for (auto format : {formats::FormatKind::Json, formats::FormatKind::Xml,
                        formats::FormatKind::Yaml, formats::FormatKind::Toon}) {
        std::vector<double> gcs_values, ees_values;
        for (const auto& s : scored) {
            if (s.record.format != format || s.degenerate) continue;
            gcs_values.push_back(s.scores.gcs);
            if (s.scores.ees) ees_values.push_back(*s.scores.ees);
        }
        if (gcs_values.empty() || ees_values.empty()) continue;
        const double mean_gcs = stats::mean_std(gcs_values).first;
        const double mean_ees = stats::mean_std(ees_values).first;
        for (const auto& [gamma, env] : scoring::gamma_sweep(mean_gcs, mean_ees, steps))
            rows.push_back({format, gamma, env});
    }
    return rows;
}

namespace {

struct SummaryGroup {
    std::string model_id;
    formats::FormatKind format;
    std::vector<const ScoredRecord*> records;
};

void write_summary_csv(std::ofstream& out, const std::vector<ScoredRecord>& scored) {
    out << "model_id,format,metric,n,mean,std\n";

    std::vector<std::string> models;
    for (const auto& s : scored)
        if (std::find(models.begin(), models.end(), s.record.model_id) == models.end())
            models.push_back(s.record.model_id);
    std::sort(models.begin(), models.end());

    for (const auto& model : models) {
        for (auto format : {formats::FormatKind::Json, formats::FormatKind::Xml,
                            formats::FormatKind::Yaml, formats::FormatKind::Toon}) {
            std::vector<const ScoredRecord*> group;
            for (const auto& s : scored)
                if (s.record.model_id == model && s.record.format == format) group.push_back(&s);
            if (group.empty()) continue;

            auto emit = [&](std::string_view metric, auto getter) {
                std::vector<double> values;
                for (const ScoredRecord* s : group)
                    if (auto v = getter(*s)) values.push_back(*v);
                out << csv_field(model) << ',' << formats::format_name(format) << ',' << metric
                    << ',' << values.size() << ',';
                if (!values.empty()) {
                    auto [mean, sd] = stats::mean_std(values);
                    out << fmt_double(mean) << ',' << fmt_double(sd);
                } else {
                    out << ',';
                }
                out << '\n';
            };

            emit("n_tokens", [](const ScoredRecord& s) -> std::optional<double> {
                return static_cast<double>(s.record.measurement.n_tokens);
            });
            emit("duration_s", [](const ScoredRecord& s) -> std::optional<double> {
                return s.record.measurement.duration_s;
            });
            emit("ce_kg", [](const ScoredRecord& s) { return s.est_ce_kg; });
            emit("render", [](const ScoredRecord& s) -> std::optional<double> {
                return static_cast<double>(s.scores.render);
            });
            emit("syntax",
                 [](const ScoredRecord& s) -> std::optional<double> { return s.scores.syntax; });
            emit("gcs", [](const ScoredRecord& s) -> std::optional<double> { return s.scores.gcs; });
            emit("ees", [](const ScoredRecord& s) { return s.scores.ees; });
            emit("gcs_env", [](const ScoredRecord& s) { return s.scores.gcs_env; });

            const auto degenerate = static_cast<std::size_t>(
                std::count_if(group.begin(), group.end(),
                              [](const ScoredRecord* s) { return s->degenerate; }));
            out << csv_field(model) << ',' << formats::format_name(format) << ",degenerate,"
                << degenerate << ",,\n";
        }
    }
}

void write_pairs_csv(std::ofstream& out, const std::vector<PairedComparison>& comparisons) {
    out << "model_id,format_a,format_b,metric,n_pairs,mean_a,std_a,mean_b,std_b,"
           "n_effective,w_statistic,p_value,method\n";
    for (const auto& cmp : comparisons) {
        out << csv_field(cmp.model_id) << ',' << formats::format_name(cmp.format_a) << ','
            << formats::format_name(cmp.format_b) << ',' << metric_name(cmp.metric) << ','
            << cmp.samples.size() << ',' << fmt_double(cmp.mean_a) << ',' << fmt_double(cmp.std_a)
            << ',' << fmt_double(cmp.mean_b) << ',' << fmt_double(cmp.std_b) << ',';
        if (cmp.all_zero) {
            out << "0,0,1,all_zero\n";
        } else {
            const auto& w = *cmp.wilcoxon;
            out << w.n_effective << ',' << fmt_double(w.w_statistic) << ','
                << fmt_double(w.p_value) << ','
                << (w.method == stats::WilcoxonMethod::Exact ? "exact" : "normal") << '\n';
        }
    }
}

void write_sweep_csv(std::ofstream& out, const std::vector<SweepRow>& sweeps) {
    out << "format,gamma,gcs_env\n";
    for (const auto& row : sweeps)
        out << formats::format_name(row.format) << ',' << fmt_double(row.gamma) << ','
            << fmt_double(row.gcs_env) << '\n';
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

void write_summary(const std::vector<ScoredRecord>& scored,
                   const std::filesystem::path& csv_path) {
    auto out = open_csv(csv_path);
    write_summary_csv(out, scored);
}

void write_pairs(const std::vector<PairedComparison>& comparisons,
                 const std::filesystem::path& csv_path) {
    auto out = open_csv(csv_path);
    write_pairs_csv(out, comparisons);
}

void write_sweep(const std::vector<SweepRow>& sweeps, const std::filesystem::path& csv_path) {
    auto out = open_csv(csv_path);
    write_sweep_csv(out, sweeps);
}

void emit_report(const std::vector<ScoredRecord>& scored,
                 const std::vector<PairedComparison>& comparisons,
                 const std::vector<SweepRow>& sweeps, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    write_summary(scored, out_dir / "summary.csv");
    write_pairs(comparisons, out_dir / "pairs.csv");
    write_sweep(sweeps, out_dir / "gamma_sweep.csv");
}

// ---------------------------------------------------------------------------
// Lock

OutputLock::OutputLock(const std::filesystem::path& target) {
    lock_path_ = target;
    lock_path_ += ".lock";
    const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
        throw LockError("output target '" + target.string() +
                        "' is locked by another run (remove '" + lock_path_.string() +
                        "' if that run is gone)");
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] ssize_t written = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

OutputLock::~OutputLock() { ::unlink(lock_path_.c_str()); }

}  // namespace toonbench::harness
