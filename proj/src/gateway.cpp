#include "tgcast/gateway.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace tgcast {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(FinishReason reason) {
    switch (reason) {
        case FinishReason::Success: return "success";
        case FinishReason::TransportError: return "transport-error";
        case FinishReason::HttpError: return "http-error";
    }
    return "unknown";
}

std::optional<FinishReason> finish_reason_from(std::string_view name) {
    if (name == "success") return FinishReason::Success;
    if (name == "transport-error") return FinishReason::TransportError;
    if (name == "http-error") return FinishReason::HttpError;
    return std::nullopt;
}

namespace {

struct EndpointParts {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

EndpointParts split_endpoint(const std::string& endpoint) {
    std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
        throw std::invalid_argument("endpoint must include a scheme: " + endpoint);
    }
    std::size_t path_start = endpoint.find('/', scheme + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/v1/chat/completions"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

json build_request_body(const std::string& prompt, const ModelConfig& config) {
    json body = {
        {"model", config.model},
        {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    if (config.send_temperature) body["temperature"] = config.temperature;
    if (config.max_tokens > 0) body["max_tokens"] = config.max_tokens;
    return body;
}

bool parse_success_body(const std::string& body, ModelResponse& out) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) return false;
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty()) {
        return false;
    }
    const json& choice = parsed["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
        return false;
    }
    out.text = choice["message"]["content"].get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
        out.detail = choice["finish_reason"].get<std::string>();
    }
    if (parsed.contains("usage") && parsed["usage"].is_object()) {
        const json& usage = parsed["usage"];
        out.usage.prompt_tokens = usage.value("prompt_tokens", 0);
        out.usage.completion_tokens = usage.value("completion_tokens", 0);
        out.usage.total_tokens = usage.value("total_tokens", 0);
    }
    return true;
}

}  // namespace

ModelResponse complete(const std::string& prompt, const ModelConfig& config) {
    const EndpointParts endpoint = split_endpoint(config.endpoint);
    const json body = build_request_body(prompt, config);
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv(config.api_key_env.c_str());
        key != nullptr && *key != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    httplib::Client client(endpoint.origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    client.set_connection_timeout(seconds.count() > 0 ? seconds.count() : 1, 0);
    client.set_read_timeout(seconds.count() > 0 ? seconds.count() : 1, 0);
    client.set_write_timeout(seconds.count() > 0 ? seconds.count() : 1, 0);

    ModelResponse response;
    const auto started = std::chrono::steady_clock::now();
    std::chrono::milliseconds backoff = config.backoff;

    for (std::size_t attempt = 1; attempt <= config.max_retries + 1; ++attempt) {
        response.attempts = attempt;
        httplib::Result result =
            client.Post(endpoint.path, headers, payload, "application/json");

        if (result && result->status == 200) {
            if (parse_success_body(result->body, response)) {
                response.finish = FinishReason::Success;
            } else {
                response.finish = FinishReason::HttpError;
                response.detail = "malformed completion body";
                response.text.clear();
            }
            break;
        }

        if (result && !retryable_status(result->status)) {
            response.finish = FinishReason::HttpError;
            response.detail = "http status " + std::to_string(result->status);
            break;
        }

        response.finish = FinishReason::TransportError;
        response.detail = result ? "http status " + std::to_string(result->status)
                                 : "transport failure: " + httplib::to_string(result.error());
        if (attempt <= config.max_retries) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }

    response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    return response;
}

std::map<std::string, ModelResponse> batch_complete(std::span<const BatchItem> items,
                                                    const ModelConfig& config,
                                                    std::size_t parallelism) {
    if (parallelism < 1) {
        throw std::invalid_argument("batch_complete: parallelism must be at least 1");
    }

    std::vector<ModelResponse> slots(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            ModelResponse response = complete(items[i].prompt, config);
            response.id = items[i].id;
            slots[i] = std::move(response);
        }
    };

    const std::size_t thread_count = std::min(parallelism, items.size());
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (std::thread& thread : threads) thread.join();

    std::map<std::string, ModelResponse> responses;
    for (ModelResponse& response : slots) {
        responses[response.id] = std::move(response);
    }
    return responses;
}

std::string to_jsonl(const ModelResponse& response, std::string_view model,
                     std::string_view prompt_checksum) {
    ordered_json line;
    line["id"] = response.id;
    line["model"] = model;
    line["prompt_checksum"] = prompt_checksum;
    line["text"] = response.text;
    line["finish"] = to_string(response.finish);
    line["detail"] = response.detail;
    line["usage"] = {{"prompt_tokens", response.usage.prompt_tokens},
                     {"completion_tokens", response.usage.completion_tokens},
                     {"total_tokens", response.usage.total_tokens}};
    line["attempts"] = response.attempts;
    return line.dump();
}

CachedResponse response_from_jsonl(std::string_view line) {
    json parsed = json::parse(line);
    CachedResponse cached;
    cached.response.id = parsed.at("id").get<std::string>();
    cached.model = parsed.at("model").get<std::string>();
    cached.prompt_checksum = parsed.at("prompt_checksum").get<std::string>();
    cached.response.text = parsed.at("text").get<std::string>();
    auto finish = finish_reason_from(parsed.at("finish").get<std::string>());
    if (!finish.has_value()) {
        throw std::runtime_error("response line: unknown finish reason");
    }
    cached.response.finish = *finish;
    cached.response.detail = parsed.value("detail", std::string{});
    if (parsed.contains("usage")) {
        const json& usage = parsed["usage"];
        cached.response.usage.prompt_tokens = usage.value("prompt_tokens", 0);
        cached.response.usage.completion_tokens = usage.value("completion_tokens", 0);
        cached.response.usage.total_tokens = usage.value("total_tokens", 0);
    }
    cached.response.attempts = parsed.value("attempts", 0);
    return cached;
}

}  // namespace tgcast
