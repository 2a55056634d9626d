#include "dcr/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dcr/error.hpp"

namespace dcr {

using json = nlohmann::json;

std::string api_key_from_env() {
    const char* key = std::getenv("DCR_API_KEY");
    return key ? std::string(key) : std::string();
}

OpenAiCompatibleBackend::OpenAiCompatibleBackend(HttpBackendConfig config) : api_key_(std::move(config.api_key)) {
    const auto& url = config.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::InvalidSettings, "base_url '" + url + "' has no scheme");
    }
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorCode::InvalidSettings, "base_url scheme must be http or https");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? std::string() : url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string OpenAiCompatibleBackend::send(const CompletionRequest& request) {
    json messages = json::array();
    if (request.system_text) messages.push_back({{"role", "system"}, {"content", *request.system_text}});
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    const json body = {
        {"model", request.settings.model_name},
        {"messages", messages},
        {"temperature", request.settings.temperature},
        {"max_tokens", request.settings.max_output_tokens},
    };

    httplib::Client client(scheme_host_port_);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(request.settings.request_timeout_s));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto result = client.Post(path_prefix_ + "/chat/completions", headers, body.dump(), "application/json");
    if (!result) {
        const auto err = result.error();
        const auto what = httplib::to_string(err);
        if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
            throw Error(ErrorCode::Timeout, what);
        }
        throw Error(ErrorCode::TransportError, what);
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
        throw Error(ErrorCode::TransportError, "HTTP " + std::to_string(status) + ": " + result->body);
    }
    if (status != 200) {
        throw Error(ErrorCode::ProviderRefusal, "HTTP " + std::to_string(status) + ": " + result->body);
    }
    try {
        const auto doc = json::parse(result->body);
        const auto& content = doc.at("choices").at(0).at("message").at("content");
        if (content.is_null()) throw Error(ErrorCode::ProviderRefusal, "completion has no content");
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ProviderRefusal, std::string("malformed completion body: ") + e.what());
    }
}

}  // namespace dcr
