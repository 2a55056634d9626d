#pragma once

#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace dcr {

/// Generation parameters passed to the model. Temperature defaults to 0 so
/// decoding is greedy.
struct GenerationSettings {
    std::string model_name = "gpt-4";
    double temperature = 0.0;
    int max_output_tokens = 2048;
    double request_timeout_s = 120.0;
    int max_retries = 3;
    double retry_backoff_s = 1.0;

    /// Throws InvalidSettings.
    void validate() const;
};

/// SHA-256 (hex) over the system text, user text, model name and temperature.
std::string compute_cache_key(const std::optional<std::string>& system_text, std::string_view user_text,
                              std::string_view model_name, double temperature);

struct CompletionRequest {
    std::optional<std::string> system_text;
    std::string user_text;
    GenerationSettings settings;
    std::string cache_key;

    /// Builds a request with its cache key filled in.
    static CompletionRequest make(std::string user_text, GenerationSettings settings,
                                  std::optional<std::string> system_text = std::nullopt);
};

struct CompletionResponse {
    std::string text;
    double latency_s = 0.0;
    bool from_cache = false;
    /// Backend attempts made; 0 for cache hits.
    int attempt_count = 0;
};

/// One attempt against a model provider. Implementations throw
/// TransportError or Timeout for failures worth retrying and
/// ProviderRefusal (or MockMiss) for everything else.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string send(const CompletionRequest& request) = 0;
};

/// On-disk response store: one `<cache_key>.json` file per request.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<std::string> lookup(const CompletionRequest& request) const;
    void store(const CompletionRequest& request, const std::string& response_text);

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path file_for(const std::string& key) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

struct GatewayOptions {
    std::optional<std::filesystem::path> cache_dir;
    /// Upper bound on concurrent backend calls; 0 means unlimited.
    int max_in_flight = 0;
};

struct GatewayStats {
    std::size_t requests = 0;
    std::size_t cache_hits = 0;
    std::size_t backend_attempts = 0;

    double hit_rate() const { return requests == 0 ? 0.0 : static_cast<double>(cache_hits) / static_cast<double>(requests); }
};

/// Front door for every model call: cache lookup, bounded concurrency and
/// retries with exponential backoff. Safe to share between threads.
class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options = {});

    CompletionResponse complete(const CompletionRequest& request);

    GatewayStats stats() const;

private:
    std::string send_with_limit(const CompletionRequest& request);

    std::shared_ptr<ChatBackend> backend_;
    std::optional<ResponseCache> cache_;
    int max_in_flight_;

    mutable std::mutex stats_mutex_;
    GatewayStats stats_;

    std::mutex slot_mutex_;
    std::condition_variable slot_cv_;
    int in_flight_ = 0;
};

}  // namespace dcr
