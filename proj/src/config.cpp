#include "toonbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace toonbench::harness {

namespace {

using Json = nlohmann::json;

void reject_unknown_keys(const Json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void read_into(const Json& obj, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void load_emission(const Json& obj, sustain::EmissionConfig& emission) {
    reject_unknown_keys(obj, {"mode", "token_factor", "grid_intensity", "x_ref"}, "emission");
    std::string mode;
    read_into(obj, "mode", mode);
    if (!mode.empty()) {
        if (mode == "measured") emission.mode = sustain::EmissionMode::Measured;
        else if (mode == "token_factor") emission.mode = sustain::EmissionMode::TokenFactor;
        else throw ConfigError("emission.mode must be 'measured' or 'token_factor'");
    }
    read_into(obj, "token_factor", emission.token_factor);
    read_into(obj, "grid_intensity", emission.grid_intensity);
    read_into(obj, "x_ref", emission.x_ref);
    if (emission.x_ref <= 0.0) throw ConfigError("emission.x_ref must be positive");
    if (emission.mode == sustain::EmissionMode::TokenFactor && emission.token_factor <= 0.0)
        throw ConfigError("emission.token_factor must be positive in token_factor mode");
}

void load_weights(const Json& obj, scoring::ScoreWeights& weights) {
    reject_unknown_keys(obj, {"alpha", "beta", "gamma"}, "weights");
    double alpha = weights.alpha, beta = weights.beta, gamma = weights.gamma;
    read_into(obj, "alpha", alpha);
    read_into(obj, "beta", beta);
    read_into(obj, "gamma", gamma);
    try {
        weights = scoring::ScoreWeights::make(alpha, beta, gamma);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("weights: ") + e.what());
    }
}

void load_templates(const Json& obj, TemplateSet& templates) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        auto format = formats::format_from_name(it.key());
        if (!format) throw ConfigError("templates: unknown format '" + it.key() + "'");
        if (!it->is_object()) throw ConfigError("templates." + it.key() + " must be an object");
        reject_unknown_keys(*it, {"preamble", "format_rules", "body"}, "templates." + it.key());
        PromptTemplate tpl;
        if (const PromptTemplate* base = templates.find(*format)) tpl = *base;
        tpl.format = *format;
        read_into(*it, "preamble", tpl.preamble);
        read_into(*it, "format_rules", tpl.format_rules);
        read_into(*it, "body", tpl.body);
        try {
            templates.set(std::move(tpl));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("templates." + it.key() + ": " + e.what());
        }
    }
}

}  // anonymous namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();

    Json root = Json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded() || !root.is_object())
        throw ConfigError("config must be a JSON object");
    reject_unknown_keys(root,
                        {"backend_url", "model_id", "api_key_env", "parallelism", "temperature",
                         "max_retries", "strip_fences", "emission", "weights", "templates"},
                        "config");

    RunConfig cfg;
    read_into(root, "backend_url", cfg.backend_url);
    read_into(root, "model_id", cfg.model_id);
    read_into(root, "api_key_env", cfg.api_key_env);
    read_into(root, "parallelism", cfg.parallelism);
    read_into(root, "temperature", cfg.temperature);
    read_into(root, "max_retries", cfg.max_retries);
    read_into(root, "strip_fences", cfg.strip_fences);
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (cfg.max_retries < 1) throw ConfigError("max_retries must be >= 1");

    if (auto it = root.find("emission"); it != root.end()) load_emission(*it, cfg.emission);
    if (auto it = root.find("weights"); it != root.end()) load_weights(*it, cfg.weights);
    if (auto it = root.find("templates"); it != root.end()) load_templates(*it, cfg.templates);
    return cfg;
}

}  // namespace toonbench::harness
