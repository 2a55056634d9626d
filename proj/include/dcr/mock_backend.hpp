#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcr/error.hpp"
#include "dcr/gateway.hpp"

namespace dcr {

enum class MatchKind { Exact, Substring };

struct MockRule {
    MatchKind kind = MatchKind::Substring;
    std::string pattern;
    std::string response;
};

/// Deterministic scripted backend. A request resolves to the first rule (in
/// declaration order) whose pattern matches its user text; anything
/// unmatched raises MockMiss.
class MockBackend : public ChatBackend {
public:
    explicit MockBackend(std::vector<MockRule> script);

    std::string send(const CompletionRequest& request) override;

    /// The next `count` calls fail with `code` before any rule is consulted.
    void fail_next(int count, ErrorCode code = ErrorCode::TransportError);
    /// Sleep injected into every call.
    void set_latency(std::chrono::milliseconds latency);

    /// User text of every call received, including failed ones.
    std::vector<std::string> call_log() const;
    std::size_t call_count() const;

private:
    std::vector<MockRule> script_;
    std::chrono::milliseconds latency_{0};

    mutable std::mutex mutex_;
    int pending_failures_ = 0;
    ErrorCode failure_code_ = ErrorCode::TransportError;
    std::vector<std::string> calls_;
};

std::shared_ptr<MockBackend> make_mock(std::vector<MockRule> script);

/// Script files are JSON arrays of {"match": "exact"|"substring",
/// "pattern": "...", "response": ...}. A non-string response is serialized
/// compactly.
std::vector<MockRule> parse_mock_script(const nlohmann::json& doc);
std::vector<MockRule> load_mock_script(const std::filesystem::path& path);

}  // namespace dcr
