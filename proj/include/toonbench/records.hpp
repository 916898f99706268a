#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toonbench/formats.hpp"
#include "toonbench/scoring.hpp"
#include "toonbench/sustainability.hpp"

namespace toonbench::harness {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class RecordFormatError : public std::runtime_error {
public:
    RecordFormatError(int line, const std::string& what)
        : std::runtime_error("record line " + std::to_string(line) + ": " + what) {}
};

/// One model output with its decode-phase measurements.
struct GenerationRecord {
    std::string instance_id;
    std::string model_id;
    formats::FormatKind format = formats::FormatKind::Json;
    std::string prompt;
    std::string output_text;        // raw completion, fence-stripped when flagged
    sustain::DecodeMeasurement measurement;
    std::string duration_mode = "decode";  // "decode" | "roundtrip"
    bool fence_stripped = false;
    bool failed = false;
    std::string timestamp;          // RFC 3339
};

struct ScoredRecord {
    GenerationRecord record;
    scoring::ScoreBundle scores;
    std::optional<double> est_ce_kg;  // absent for degenerate (zero-token) records
    bool degenerate = false;
};

std::string record_to_jsonl(const GenerationRecord& rec);
std::string scored_to_jsonl(const ScoredRecord& rec);

std::vector<GenerationRecord> read_records(const std::filesystem::path& path);
std::vector<ScoredRecord> read_scored(const std::filesystem::path& path);

void write_records(const std::filesystem::path& path, const std::vector<GenerationRecord>& recs);
void write_scored(const std::filesystem::path& path, const std::vector<ScoredRecord>& recs);

}  // namespace toonbench::harness
