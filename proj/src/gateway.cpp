#include "dcr/gateway.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "dcr/error.hpp"

namespace dcr {

using json = nlohmann::json;

void GenerationSettings::validate() const {
    if (model_name.empty()) throw Error(ErrorCode::InvalidSettings, "model_name is empty");
    if (!std::isfinite(temperature) || temperature < 0.0) {
        throw Error(ErrorCode::InvalidSettings, "temperature must be a non-negative number");
    }
    if (max_output_tokens < 1) throw Error(ErrorCode::InvalidSettings, "max_output_tokens must be at least 1");
    if (!(request_timeout_s > 0.0)) throw Error(ErrorCode::InvalidSettings, "request_timeout_s must be positive");
    if (max_retries < 0) throw Error(ErrorCode::InvalidSettings, "max_retries must be non-negative");
    if (max_retries > 0 && !(retry_backoff_s > 0.0)) {
        throw Error(ErrorCode::InvalidSettings, "retry_backoff_s must be positive when retries are enabled");
    }
}

std::string compute_cache_key(const std::optional<std::string>& system_text, std::string_view user_text,
                              std::string_view model_name, double temperature) {
    json canonical = json::array();
    canonical.push_back(system_text ? json(*system_text) : json(nullptr));
    canonical.push_back(std::string(user_text));
    canonical.push_back(std::string(model_name));
    canonical.push_back(temperature);
    const std::string payload = canonical.dump();

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(payload.data(), payload.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0x0f]);
    }
    return hex;
}

CompletionRequest CompletionRequest::make(std::string user_text, GenerationSettings settings,
                                          std::optional<std::string> system_text) {
    CompletionRequest req;
    req.cache_key = compute_cache_key(system_text, user_text, settings.model_name, settings.temperature);
    req.system_text = std::move(system_text);
    req.user_text = std::move(user_text);
    req.settings = std::move(settings);
    return req;
}

// ---------------------------------------------------------------------------
// ResponseCache

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create cache dir " + dir_.string() + ": " + ec.message());
}

std::filesystem::path ResponseCache::file_for(const std::string& key) const { return dir_ / (key + ".json"); }

std::optional<std::string> ResponseCache::lookup(const CompletionRequest& request) const {
    const auto path = file_for(request.cache_key);
    std::lock_guard lock(mutex_);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        const auto doc = json::parse(in);
        return doc.at("response_text").get<std::string>();
    } catch (const json::exception& e) {
        spdlog::warn("ignoring unreadable cache entry {}: {}", path.string(), e.what());
        return std::nullopt;
    }
}

void ResponseCache::store(const CompletionRequest& request, const std::string& response_text) {
    json doc;
    doc["request"] = {
        {"system_text", request.system_text ? json(*request.system_text) : json(nullptr)},
        {"user_text", request.user_text},
        {"model_name", request.settings.model_name},
        {"temperature", request.settings.temperature},
        {"max_output_tokens", request.settings.max_output_tokens},
        {"cache_key", request.cache_key},
    };
    doc["response_text"] = response_text;
    doc["created_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();

    const auto path = file_for(request.cache_key);
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    const auto tmp = path.string() + ".tmp" + tid.str();

    std::lock_guard lock(mutex_);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write cache file " + tmp);
        out << doc.dump(2) << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot move cache file into place: " + ec.message());
}

// ---------------------------------------------------------------------------
// LlmGateway

LlmGateway::LlmGateway(std::shared_ptr<ChatBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)), max_in_flight_(options.max_in_flight) {
    if (!backend_) throw Error(ErrorCode::InvalidArgument, "gateway needs a backend");
    if (max_in_flight_ < 0) throw Error(ErrorCode::InvalidArgument, "max_in_flight must be non-negative");
    if (options.cache_dir) cache_.emplace(*options.cache_dir);
}

GatewayStats LlmGateway::stats() const {
    std::lock_guard lock(stats_mutex_);
    return stats_;
}

std::string LlmGateway::send_with_limit(const CompletionRequest& request) {
    if (max_in_flight_ == 0) return backend_->send(request);

    {
        std::unique_lock lock(slot_mutex_);
        slot_cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
        ++in_flight_;
    }
    struct Release {
        LlmGateway& self;
        ~Release() {
            {
                std::lock_guard lock(self.slot_mutex_);
                --self.in_flight_;
            }
            self.slot_cv_.notify_one();
        }
    } release{*this};
    return backend_->send(request);
}

CompletionResponse LlmGateway::complete(const CompletionRequest& request) {
    request.settings.validate();
    if (request.cache_key.empty()) throw Error(ErrorCode::InvalidArgument, "request has no cache key");

    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    {
        std::lock_guard lock(stats_mutex_);
        ++stats_.requests;
    }

    if (cache_) {
        if (auto hit = cache_->lookup(request)) {
            std::lock_guard lock(stats_mutex_);
            ++stats_.cache_hits;
            return CompletionResponse{std::move(*hit), elapsed(), true, 0};
        }
    }

    const int max_attempts = request.settings.max_retries + 1;
    for (int attempt = 1;; ++attempt) {
        {
            std::lock_guard lock(stats_mutex_);
            ++stats_.backend_attempts;
        }
        try {
            auto text = send_with_limit(request);
            if (cache_) cache_->store(request, text);
            return CompletionResponse{std::move(text), elapsed(), false, attempt};
        } catch (const Error& e) {
            const bool retryable = e.code() == ErrorCode::TransportError || e.code() == ErrorCode::Timeout;
            if (!retryable || attempt >= max_attempts) throw;
            const double delay = request.settings.retry_backoff_s * std::pow(2.0, attempt - 1);
            spdlog::warn("attempt {}/{} failed ({}); retrying in {:.3f}s", attempt, max_attempts, e.what(), delay);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
    }
}

}  // namespace dcr
