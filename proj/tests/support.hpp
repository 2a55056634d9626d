#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dcr/agents.hpp"
#include "dcr/gateway.hpp"
#include "dcr/mock_backend.hpp"
#include "dcr/prompts.hpp"

namespace testing_support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("dcr-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string data_file(const std::string& name) { return read_text(std::filesystem::path(DCR_TEST_DATA_DIR) / name); }

/// Scripted backend wired to a gateway and the default prompts.
struct MockEnv {
    explicit MockEnv(std::vector<dcr::MockRule> script, dcr::GatewayOptions options = {})
        : backend(dcr::make_mock(std::move(script))),
          gateway(backend, std::move(options)),
          prompts(dcr::PromptRegistry::defaults()),
          ctx{gateway, prompts, fast_settings()} {}

    static dcr::GenerationSettings fast_settings() {
        dcr::GenerationSettings s;
        s.retry_backoff_s = 0.001;
        return s;
    }

    std::shared_ptr<dcr::MockBackend> backend;
    dcr::LlmGateway gateway;
    dcr::PromptRegistry prompts;
    dcr::AgentContext ctx;
};

inline dcr::MockRule substring(std::string pattern, std::string response) {
    return {dcr::MatchKind::Substring, std::move(pattern), std::move(response)};
}

}  // namespace testing_support
