#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "toonbench/records.hpp"

namespace toonbench::harness {

class ReplayMiss : public std::runtime_error {
public:
    explicit ReplayMiss(const std::string& what) : std::runtime_error(what) {}
};

class BackendError : public std::runtime_error {
public:
    explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

struct BackendResult {
    std::string text;
    sustain::DecodeMeasurement measurement;
    std::string duration_mode = "roundtrip";
    bool failed = false;
    std::optional<std::string> timestamp;  // replay passes the stored stamp through
};

/// An opaque model: replayed recordings or a live HTTP endpoint.
class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendResult generate(const std::string& instance_id, formats::FormatKind format,
                                   const std::string& prompt) = 0;
};

/// Serves pre-recorded outputs and measurements keyed by (instance, format).
/// Throws ReplayMiss for uncovered pairs.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const std::filesystem::path& record_file);
    BackendResult generate(const std::string& instance_id, formats::FormatKind format,
                           const std::string& prompt) override;

private:
    std::map<std::pair<std::string, std::string>, GenerationRecord> rows_;
};

struct LiveBackendConfig {
    std::string base_url = "http://127.0.0.1:8080";
    std::string model_id = "model";
    std::string api_key;      // sent as a Bearer token when non-empty
    double temperature = 0.0;
    int max_attempts = 3;
    double backoff_initial_s = 0.5;  // doubles per retry
    int timeout_s = 120;
};

/// OpenAI-compatible chat-completions client. Non-streaming: duration is
/// whole-request wall time, labeled duration_mode=roundtrip. Token count from
/// usage.completion_tokens. Retries connection errors and 5xx responses with
/// exponential backoff; throws BackendError with the attempt log afterwards.
class LiveBackend : public Backend {
public:
    explicit LiveBackend(LiveBackendConfig config) : config_(std::move(config)) {}
    BackendResult generate(const std::string& instance_id, formats::FormatKind format,
                           const std::string& prompt) override;

private:
    LiveBackendConfig config_;
};

}  // namespace toonbench::harness
