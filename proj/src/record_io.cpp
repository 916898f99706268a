#include <fstream>
#include <sstream>

#include <json.hpp>

#include "toonbench/records.hpp"

namespace toonbench::harness {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson record_json(const GenerationRecord& rec) {
    OrderedJson j;
    j["instance_id"] = rec.instance_id;
    j["model_id"] = rec.model_id;
    j["format"] = std::string(formats::format_name(rec.format));
    j["prompt"] = rec.prompt;
    j["output_text"] = rec.output_text;
    j["n_tokens"] = rec.measurement.n_tokens;
    j["duration_s"] = rec.measurement.duration_s;
    j["duration_mode"] = rec.duration_mode;
    j["energy_kwh"] = rec.measurement.energy_kwh ? OrderedJson(*rec.measurement.energy_kwh)
                                                 : OrderedJson(nullptr);
    j["ce_kg"] = rec.measurement.ce_kg ? OrderedJson(*rec.measurement.ce_kg) : OrderedJson(nullptr);
    j["fence_stripped"] = rec.fence_stripped;
    j["failed"] = rec.failed;
    j["timestamp"] = rec.timestamp;
    return j;
}

template <typename T>
T require_field(const OrderedJson& j, const char* key, int line) {
    auto it = j.find(key);
    if (it == j.end()) throw RecordFormatError(line, std::string("missing field '") + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw RecordFormatError(line, std::string("field '") + key + "' has the wrong type");
    }
}

std::optional<double> optional_number(const OrderedJson& j, const char* key, int line) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw RecordFormatError(line, std::string("field '") + key + "' must be a number or null");
    return it->get<double>();
}

GenerationRecord record_from_json(const OrderedJson& j, int line) {
    GenerationRecord rec;
    rec.instance_id = require_field<std::string>(j, "instance_id", line);
    rec.model_id = require_field<std::string>(j, "model_id", line);
    const std::string fmt = require_field<std::string>(j, "format", line);
    auto kind = formats::format_from_name(fmt);
    if (!kind) throw RecordFormatError(line, "unknown format '" + fmt + "'");
    rec.format = *kind;
    rec.prompt = require_field<std::string>(j, "prompt", line);
    rec.output_text = require_field<std::string>(j, "output_text", line);
    rec.measurement.n_tokens = require_field<long>(j, "n_tokens", line);
    if (rec.measurement.n_tokens < 0) throw RecordFormatError(line, "n_tokens must be >= 0");
    rec.measurement.duration_s = require_field<double>(j, "duration_s", line);
    rec.duration_mode = require_field<std::string>(j, "duration_mode", line);
    rec.measurement.energy_kwh = optional_number(j, "energy_kwh", line);
    rec.measurement.ce_kg = optional_number(j, "ce_kg", line);
    rec.fence_stripped = require_field<bool>(j, "fence_stripped", line);
    rec.failed = require_field<bool>(j, "failed", line);
    rec.timestamp = require_field<std::string>(j, "timestamp", line);
    return rec;
}

template <typename Row>
std::vector<Row> read_jsonl(const std::filesystem::path& path,
                            Row (*from_json)(const OrderedJson&, int)) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<Row> rows;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        OrderedJson j = OrderedJson::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) throw RecordFormatError(number, "invalid JSON");
        if (!j.is_object()) throw RecordFormatError(number, "expected a JSON object");
        rows.push_back(from_json(j, number));
    }
    return rows;
}

ScoredRecord scored_from_json(const OrderedJson& j, int line) {
    ScoredRecord s;
    s.record = record_from_json(j, line);
    s.scores.render = require_field<int>(j, "render", line);
    s.scores.syntax = require_field<double>(j, "syntax", line);
    s.scores.gcs = require_field<double>(j, "gcs", line);
    s.est_ce_kg = optional_number(j, "est_ce_kg", line);
    s.scores.x_intensity = optional_number(j, "x_intensity", line);
    s.scores.ees = optional_number(j, "ees", line);
    s.scores.gcs_env = optional_number(j, "gcs_env", line);
    s.degenerate = require_field<bool>(j, "degenerate", line);
    return s;
}

}  // namespace

std::string record_to_jsonl(const GenerationRecord& rec) { return record_json(rec).dump(); }

std::string scored_to_jsonl(const ScoredRecord& rec) {
    OrderedJson j = record_json(rec.record);
    j["render"] = rec.scores.render;
    j["syntax"] = rec.scores.syntax;
    j["gcs"] = rec.scores.gcs;
    j["est_ce_kg"] = rec.est_ce_kg ? OrderedJson(*rec.est_ce_kg) : OrderedJson(nullptr);
    j["x_intensity"] =
        rec.scores.x_intensity ? OrderedJson(*rec.scores.x_intensity) : OrderedJson(nullptr);
    j["ees"] = rec.scores.ees ? OrderedJson(*rec.scores.ees) : OrderedJson(nullptr);
    j["gcs_env"] = rec.scores.gcs_env ? OrderedJson(*rec.scores.gcs_env) : OrderedJson(nullptr);
    j["degenerate"] = rec.degenerate;
    return j.dump();
}

std::vector<GenerationRecord> read_records(const std::filesystem::path& path) {
    return read_jsonl<GenerationRecord>(path, record_from_json);
}

std::vector<ScoredRecord> read_scored(const std::filesystem::path& path) {
    return read_jsonl<ScoredRecord>(path, scored_from_json);
}

void write_records(const std::filesystem::path& path, const std::vector<GenerationRecord>& recs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (const auto& rec : recs) out << record_to_jsonl(rec) << '\n';
}

void write_scored(const std::filesystem::path& path, const std::vector<ScoredRecord>& recs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (const auto& rec : recs) out << scored_to_jsonl(rec) << '\n';
}

}  // namespace toonbench::harness
