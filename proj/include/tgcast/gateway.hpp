#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tgcast/types.hpp"

namespace tgcast {

// Chat-completions endpoint configuration. The API key is read from the
// named environment variable at request time and never stored in artifacts.
struct ModelConfig {
    std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
    std::string model;
    double temperature = 0.0;
    bool send_temperature = true;  // reasoning models run with provider defaults
    std::size_t max_tokens = 0;    // 0 = provider default
    std::string api_key_env = "OPENAI_API_KEY";
    std::size_t max_retries = 3;
    std::chrono::milliseconds timeout{120000};
    std::chrono::milliseconds backoff{250};  // doubled per retry
};

enum class FinishReason {
    Success,
    TransportError,  // retries exhausted on 429/5xx/timeout
    HttpError        // non-retryable 4xx
};

std::string_view to_string(FinishReason reason);
std::optional<FinishReason> finish_reason_from(std::string_view name);

struct TokenUsage {
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
    std::size_t total_tokens = 0;
};

struct ModelResponse {
    std::string id;  // record id, filled by batch_complete
    std::string text;
    FinishReason finish = FinishReason::TransportError;
    std::string detail;  // provider finish_reason or error description
    TokenUsage usage;
    std::chrono::milliseconds latency{0};
    std::size_t attempts = 0;

    bool ok() const { return finish == FinishReason::Success; }
};

// One chat request carrying the prompt as a single user message. Transient
// failures (HTTP 429/5xx, transport errors) retry with exponential backoff up
// to max_retries; other 4xx fail immediately.
ModelResponse complete(const std::string& prompt, const ModelConfig& config);

struct BatchItem {
    std::string id;
    std::string prompt;
};

// Completes every item with at most `parallelism` requests in flight. The
// result map is keyed by item id and independent of completion order; failed
// items carry failure responses rather than being dropped.
std::map<std::string, ModelResponse> batch_complete(std::span<const BatchItem> items,
                                                    const ModelConfig& config,
                                                    std::size_t parallelism);

// Cache line schema {id, model, prompt_checksum, text, finish, detail, usage,
// attempts}. Latency is runtime telemetry and deliberately not persisted, so
// artifacts stay byte-deterministic.
std::string to_jsonl(const ModelResponse& response, std::string_view model,
                     std::string_view prompt_checksum);

struct CachedResponse {
    ModelResponse response;
    std::string model;
    std::string prompt_checksum;
};

CachedResponse response_from_jsonl(std::string_view line);

}  // namespace tgcast
