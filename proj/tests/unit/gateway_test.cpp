#include <chrono>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dcr/error.hpp"
#include "dcr/gateway.hpp"
#include "dcr/http_backend.hpp"
#include "dcr/mock_backend.hpp"
#include "support.hpp"

using namespace dcr;
using testing_support::substring;
using testing_support::TempDir;

namespace {

GenerationSettings fast() {
    GenerationSettings s;
    s.retry_backoff_s = 0.001;
    return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoError;
}

}  // namespace

TEST(Settings, DefaultsAndValidation) {
    GenerationSettings s;
    EXPECT_EQ(s.temperature, 0.0);
    EXPECT_NO_THROW(s.validate());
    s.max_retries = -1;
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidSettings);
    s.max_retries = 2;
    s.retry_backoff_s = 0.0;
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidSettings);
    s.max_retries = 0;
    EXPECT_NO_THROW(s.validate());
}

TEST(CacheKey, IsSha256OfCanonicalRequest) {
    EXPECT_EQ(compute_cache_key(std::nullopt, "ping", "gpt-4", 0.0),
              "631025625b6baf78dcd242562a65c058c866b716ed4404c40cfe0c80386644a9");
    const auto base = compute_cache_key(std::nullopt, "ping", "gpt-4", 0.0);
    EXPECT_NE(base, compute_cache_key(std::string("sys"), "ping", "gpt-4", 0.0));
    EXPECT_NE(base, compute_cache_key(std::nullopt, "ping", "gpt-4o", 0.0));
    EXPECT_NE(base, compute_cache_key(std::nullopt, "ping", "gpt-4", 0.5));
    EXPECT_EQ(CompletionRequest::make("ping", GenerationSettings{}).cache_key, base);
}

TEST(Gateway, ScriptedEcho) {
    LlmGateway gw(make_mock({{MatchKind::Exact, "ping", "pong"}}));
    const auto r = gw.complete(CompletionRequest::make("ping", fast()));
    EXPECT_EQ(r.text, "pong");
    EXPECT_FALSE(r.from_cache);
    EXPECT_EQ(r.attempt_count, 1);
}

TEST(Gateway, SecondIdenticalRequestHitsCache) {
    TempDir dir;
    auto mock = make_mock({{MatchKind::Exact, "ping", "pong"}});
    LlmGateway gw(mock, {dir.path(), 0});
    const auto first = gw.complete(CompletionRequest::make("ping", fast()));
    const auto second = gw.complete(CompletionRequest::make("ping", fast()));
    EXPECT_EQ(second.text, first.text);
    EXPECT_TRUE(second.from_cache);
    EXPECT_EQ(second.attempt_count, 0);
    EXPECT_EQ(mock->call_count(), 1u);
    EXPECT_DOUBLE_EQ(gw.stats().hit_rate(), 0.5);

    // A new gateway over the same directory resumes from disk.
    LlmGateway again(make_mock({}), {dir.path(), 0});
    EXPECT_TRUE(again.complete(CompletionRequest::make("ping", fast())).from_cache);
}

TEST(Gateway, CacheFileLayout) {
    TempDir dir;
    LlmGateway gw(make_mock({{MatchKind::Exact, "ping", "pong"}}), {dir.path(), 0});
    const auto req = CompletionRequest::make("ping", fast());
    gw.complete(req);
    const auto doc = nlohmann::json::parse(testing_support::read_text(dir / (req.cache_key + ".json")));
    EXPECT_EQ(doc.at("response_text"), "pong");
    EXPECT_EQ(doc.at("request").at("user_text"), "ping");
    EXPECT_TRUE(doc.at("created_unix").is_number_integer());
}

TEST(Gateway, RetriesTransportFailures) {
    auto mock = make_mock({{MatchKind::Exact, "ping", "pong"}});
    mock->fail_next(2);
    LlmGateway gw(mock);
    auto settings = fast();
    settings.max_retries = 3;
    const auto r = gw.complete(CompletionRequest::make("ping", settings));
    EXPECT_EQ(r.text, "pong");
    EXPECT_EQ(r.attempt_count, 3);
    EXPECT_EQ(mock->call_log().size(), 3u);
}

TEST(Gateway, GivesUpAfterRetryBudget) {
    auto mock = make_mock({{MatchKind::Exact, "ping", "pong"}});
    mock->fail_next(5, ErrorCode::Timeout);
    LlmGateway gw(mock);
    auto settings = fast();
    settings.max_retries = 2;
    EXPECT_EQ(code_of([&] { gw.complete(CompletionRequest::make("ping", settings)); }), ErrorCode::Timeout);
    EXPECT_EQ(mock->call_count(), 3u);
}

TEST(Gateway, RefusalsAreNotRetried) {
    auto mock = make_mock({{MatchKind::Exact, "ping", "pong"}});
    mock->fail_next(1, ErrorCode::ProviderRefusal);
    LlmGateway gw(mock);
    EXPECT_EQ(code_of([&] { gw.complete(CompletionRequest::make("ping", fast())); }), ErrorCode::ProviderRefusal);
    EXPECT_EQ(mock->call_count(), 1u);
}

TEST(Mock, EmptyScriptMisses) {
    LlmGateway gw(make_mock({}));
    EXPECT_EQ(code_of([&] { gw.complete(CompletionRequest::make("anything", fast())); }), ErrorCode::MockMiss);
}

TEST(Mock, FirstMatchingRuleWins) {
    LlmGateway gw(make_mock({substring("Attempt Answer", "first"), substring("Answer", "second")}));
    EXPECT_EQ(gw.complete(CompletionRequest::make("## Attempt Answer ##: x", fast())).text, "first");
    EXPECT_EQ(gw.complete(CompletionRequest::make("Answer only", fast())).text, "second");
}

TEST(Mock, ScriptParsing) {
    const auto rules = parse_mock_script(nlohmann::json::parse(
        R"([{"match":"exact","pattern":"a","response":"b"},{"match":"substring","pattern":"c","response":{"answer":[1]}}])"));
    ASSERT_EQ(rules.size(), 2u);
    EXPECT_EQ(rules[0].kind, MatchKind::Exact);
    EXPECT_EQ(rules[1].response, R"({"answer":[1]})");
    EXPECT_THROW(parse_mock_script(nlohmann::json::parse(R"([{"match":"regex","pattern":"a","response":"b"}])")), Error);
}

TEST(Gateway, InFlightLimitIsRespected) {
    auto mock = make_mock({substring("q", "a")});
    mock->set_latency(std::chrono::milliseconds(20));
    LlmGateway gw(mock, {std::nullopt, 2});
    std::vector<std::jthread> threads;
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 6; ++i) {
        threads.emplace_back([&gw, i] { gw.complete(CompletionRequest::make("q" + std::to_string(i), fast())); });
    }
    threads.clear();
    const auto elapsed = std::chrono::steady_clock::now() - start;
    // Six 20 ms calls, two at a time: at least three waves.
    EXPECT_GE(elapsed, std::chrono::milliseconds(58));
}

TEST(Gateway, CacheNeverChangesText) {
    TempDir dir;
    auto script = std::vector<MockRule>{substring("a", "one"), substring("b", "two")};
    LlmGateway plain(make_mock(script));
    LlmGateway cached(make_mock(script), {dir.path(), 0});
    for (const char* q : {"a", "b", "a", "ab", "b"}) {
        EXPECT_EQ(plain.complete(CompletionRequest::make(q, fast())).text,
                  cached.complete(CompletionRequest::make(q, fast())).text);
    }
}

// ---------------------------------------------------------------------------
// HTTP backend against a local server

namespace {

class LocalServer {
public:
    explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string completion_body(const std::string& content) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

}  // namespace

TEST(HttpBackend, SendsChatCompletionRequest) {
    nlohmann::json seen;
    std::string auth;
    LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(completion_body("pong"), "application/json");
    });
    OpenAiCompatibleBackend backend({server.base_url(), "secret"});
    auto settings = fast();
    settings.model_name = "test-model";
    EXPECT_EQ(backend.send(CompletionRequest::make("ping", settings, std::string("be brief"))), "pong");
    EXPECT_EQ(auth, "Bearer secret");
    EXPECT_EQ(seen.at("model"), "test-model");
    EXPECT_EQ(seen.at("temperature"), 0.0);
    EXPECT_EQ(seen.at("max_tokens"), 2048);
    ASSERT_EQ(seen.at("messages").size(), 2u);
    EXPECT_EQ(seen.at("messages")[0].at("role"), "system");
    EXPECT_EQ(seen.at("messages")[1].at("content"), "ping");
}

TEST(HttpBackend, MapsStatusCodes) {
    int status = 200;
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        res.status = status;
        res.set_content(status == 200 ? completion_body("ok") : "{}", "application/json");
    });
    OpenAiCompatibleBackend backend({server.base_url(), ""});
    const auto req = CompletionRequest::make("x", fast());
    status = 429;
    EXPECT_EQ(code_of([&] { backend.send(req); }), ErrorCode::TransportError);
    status = 503;
    EXPECT_EQ(code_of([&] { backend.send(req); }), ErrorCode::TransportError);
    status = 400;
    EXPECT_EQ(code_of([&] { backend.send(req); }), ErrorCode::ProviderRefusal);
    status = 200;
    EXPECT_EQ(backend.send(req), "ok");
}

TEST(HttpBackend, RetriesThroughGateway) {
    int calls = 0;
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = 502;
            return;
        }
        res.set_content(completion_body("finally"), "application/json");
    });
    LlmGateway gw(std::make_shared<OpenAiCompatibleBackend>(HttpBackendConfig{server.base_url(), ""}));
    const auto r = gw.complete(CompletionRequest::make("x", fast()));
    EXPECT_EQ(r.text, "finally");
    EXPECT_EQ(r.attempt_count, 3);
}

TEST(HttpBackend, SlowServerTimesOut) {
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(400));
        res.set_content(completion_body("late"), "application/json");
    });
    OpenAiCompatibleBackend backend({server.base_url(), ""});
    auto settings = fast();
    settings.request_timeout_s = 0.1;
    EXPECT_EQ(code_of([&] { backend.send(CompletionRequest::make("x", settings)); }), ErrorCode::Timeout);
}

TEST(HttpBackend, RejectsBadBaseUrl) {
    EXPECT_EQ(code_of([] { OpenAiCompatibleBackend({"localhost:80", ""}); }), ErrorCode::InvalidSettings);
}
