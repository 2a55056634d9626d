#pragma once

#include <string>

#include "dcr/gateway.hpp"

namespace dcr {

struct HttpBackendConfig {
    /// Root of an OpenAI-compatible API, e.g. "https://api.openai.com/v1".
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
};

/// Reads DCR_API_KEY; empty when unset.
std::string api_key_from_env();

/// POSTs chat-completion requests to `<base_url>/chat/completions`.
/// 429 and 5xx responses and connection failures are reported as
/// TransportError, read timeouts as Timeout, other HTTP errors as
/// ProviderRefusal.
class OpenAiCompatibleBackend : public ChatBackend {
public:
    explicit OpenAiCompatibleBackend(HttpBackendConfig config);

    std::string send(const CompletionRequest& request) override;

private:
    std::string scheme_host_port_;
    std::string path_prefix_;
    std::string api_key_;
};

}  // namespace dcr
