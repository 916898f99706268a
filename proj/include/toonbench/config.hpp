#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "toonbench/harness.hpp"

namespace toonbench::harness {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Harness configuration file (JSON). Every field is optional; unknown keys
/// are rejected so typos surface early.
struct RunConfig {
    std::string backend_url = "http://127.0.0.1:8080";
    std::string model_id = "model";
    std::string api_key_env = "TOONBENCH_API_KEY";  // key only ever comes from the env
    int parallelism = 1;
    double temperature = 0.0;
    int max_retries = 3;
    bool strip_fences = true;
    sustain::EmissionConfig emission;
    scoring::ScoreWeights weights;
    TemplateSet templates = TemplateSet::defaults();
};

/// Throws ConfigError on unreadable files, malformed JSON, unknown keys or
/// invalid values.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace toonbench::harness
