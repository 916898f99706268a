#include "toonbench/backend.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace toonbench::harness {

ReplayBackend::ReplayBackend(const std::filesystem::path& record_file) {
    for (auto& rec : read_records(record_file)) {
        auto key = std::make_pair(rec.instance_id, std::string(formats::format_name(rec.format)));
        rows_[key] = std::move(rec);
    }
}

BackendResult ReplayBackend::generate(const std::string& instance_id, formats::FormatKind format,
                                      const std::string&) {
    auto it = rows_.find(std::make_pair(instance_id, std::string(formats::format_name(format))));
    if (it == rows_.end())
        throw ReplayMiss("replay file has no record for instance '" + instance_id +
                         "' format '" + std::string(formats::format_name(format)) + "'");
    const GenerationRecord& row = it->second;
    BackendResult result;
    result.text = row.output_text;
    result.measurement = row.measurement;
    result.duration_mode = row.duration_mode;
    result.failed = row.failed;
    result.timestamp = row.timestamp;
    return result;
}

BackendResult LiveBackend::generate(const std::string&, formats::FormatKind,
                                    const std::string& prompt) {
    nlohmann::json body;
    body["model"] = config_.model_id;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = config_.temperature;
    const std::string payload = body.dump();

    std::string attempt_log;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            const double delay = config_.backoff_initial_s * std::ldexp(1.0, attempt - 2);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_s);
        client.set_read_timeout(config_.timeout_s);
        if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

        const auto start = std::chrono::steady_clock::now();
        httplib::Result res = client.Post("/v1/chat/completions", payload, "application/json");
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (!res) {
            attempt_log += "attempt " + std::to_string(attempt) + ": " + httplib::to_string(res.error()) + "; ";
            continue;
        }
        if (res->status >= 500) {
            attempt_log += "attempt " + std::to_string(attempt) + ": HTTP " + std::to_string(res->status) + "; ";
            continue;
        }
        if (res->status != 200)
            throw BackendError("backend returned HTTP " + std::to_string(res->status) + ": " + res->body);

        nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty())
            throw BackendError("malformed completion response: " + res->body.substr(0, 200));
        const auto& choice = reply["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content"))
            throw BackendError("completion response carries no message content");

        BackendResult result;
        result.text = choice["message"]["content"].get<std::string>();
        result.duration_mode = "roundtrip";  // non-streaming: whole-request wall time
        result.measurement.duration_s = elapsed;
        if (reply.contains("usage") && reply["usage"].contains("completion_tokens"))
            result.measurement.n_tokens = reply["usage"]["completion_tokens"].get<long>();
        else
            throw BackendError("completion response carries no usage.completion_tokens");
        return result;
    }
    throw BackendError("backend unreachable after " + std::to_string(config_.max_attempts) +
                       " attempts: " + attempt_log);
}

}  // namespace toonbench::harness
