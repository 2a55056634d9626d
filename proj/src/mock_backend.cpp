#include "dcr/mock_backend.hpp"

#include <fstream>
#include <thread>

namespace dcr {

using json = nlohmann::json;

MockBackend::MockBackend(std::vector<MockRule> script) : script_(std::move(script)) {}

std::string MockBackend::send(const CompletionRequest& request) {
    bool fail = false;
    ErrorCode code{};
    {
        std::lock_guard lock(mutex_);
        calls_.push_back(request.user_text);
        if (pending_failures_ > 0) {
            --pending_failures_;
            fail = true;
            code = failure_code_;
        }
    }
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
    if (fail) throw Error(code, "scripted failure");

    for (const auto& rule : script_) {
        const bool hit = rule.kind == MatchKind::Exact ? request.user_text == rule.pattern
                                                       : request.user_text.find(rule.pattern) != std::string::npos;
        if (hit) return rule.response;
    }
    const auto preview = request.user_text.substr(0, 80);
    throw Error(ErrorCode::MockMiss, "no scripted response for request starting '" + preview + "'");
}

void MockBackend::fail_next(int count, ErrorCode code) {
    std::lock_guard lock(mutex_);
    pending_failures_ = count;
    failure_code_ = code;
}

void MockBackend::set_latency(std::chrono::milliseconds latency) { latency_ = latency; }

std::vector<std::string> MockBackend::call_log() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t MockBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

std::shared_ptr<MockBackend> make_mock(std::vector<MockRule> script) {
    return std::make_shared<MockBackend>(std::move(script));
}

std::vector<MockRule> parse_mock_script(const json& doc) {
    if (!doc.is_array()) throw Error(ErrorCode::SchemaMismatch, "mock script must be a JSON array");
    std::vector<MockRule> rules;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        auto where = [&] { return "mock script entry " + std::to_string(i); };
        if (!entry.is_object() || !entry.contains("pattern") || !entry.contains("response")) {
            throw Error(ErrorCode::SchemaMismatch, where() + " needs 'pattern' and 'response'");
        }
        MockRule rule;
        const auto match = entry.value("match", std::string("substring"));
        if (match == "exact") {
            rule.kind = MatchKind::Exact;
        } else if (match == "substring") {
            rule.kind = MatchKind::Substring;
        } else {
            throw Error(ErrorCode::SchemaMismatch, where() + " has unknown match kind '" + match + "'");
        }
        rule.pattern = entry.at("pattern").get<std::string>();
        const auto& response = entry.at("response");
        rule.response = response.is_string() ? response.get<std::string>() : response.dump();
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<MockRule> load_mock_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileMissing, "cannot open mock script " + path.string());
    try {
        return parse_mock_script(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
    }
}

}  // namespace dcr
