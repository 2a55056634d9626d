#include "dcr/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dcr/error.hpp"
#include "dcr/segmenter.hpp"

namespace dcr {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorCode::InvalidArgument, "bad value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value);
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const std::string s(value);
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
    bad_value(key, value);
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view raw) {
    const auto norm = normalize_whitespace(raw);
    const std::string_view value = norm;
    if (key == "task") task = parse_task_kind(value);
    else if (key == "dataset") dataset = value;
    else if (key == "family") family = parse_dataset_family(value);
    else if (key == "field_map") {
        parse_field_map(value);
        field_map = value;
    } else if (key == "limit") {
        if (value.empty() || value == "none") limit.reset();
        else limit = parse_number<std::size_t>(key, value);
    } else if (key == "model_name" || key == "model") generation.model_name = value;
    else if (key == "temperature") generation.temperature = parse_double(key, value);
    else if (key == "max_output_tokens") generation.max_output_tokens = parse_number<int>(key, value);
    else if (key == "request_timeout_s") generation.request_timeout_s = parse_double(key, value);
    else if (key == "max_retries") generation.max_retries = parse_number<int>(key, value);
    else if (key == "retry_backoff_s") generation.retry_backoff_s = parse_double(key, value);
    else if (key == "base_url") base_url = value;
    else if (key == "max_in_flight") max_in_flight = parse_number<int>(key, value);
    else if (key == "cache_dir") cache_dir = value;
    else if (key == "prompt_dir") prompt_dir = value;
    else if (key == "mock_script") mock_script = value;
    else if (key == "rounds") rounds = parse_number<int>(key, value);
    else if (key == "threads") threads = parse_number<int>(key, value);
    else if (key == "fail_policy") fail_policy = parse_fail_policy(value);
    else if (key == "positive_class") positive_class = parse_number<int>(key, value);
    else if (key == "abbreviations_file") abbreviations_file = value;
    else if (key == "min_sentence_chars") min_sentence_chars = parse_number<int>(key, value);
    else if (key == "newline_boundary") newline_boundary = parse_bool(key, value);
    else if (key == "out") out = value;
    else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
}

std::map<std::string, std::string> RunConfig::to_pairs() const {
    return {
        {"task", std::string(to_string(task))},
        {"dataset", dataset},
        {"family", std::string(to_string(family))},
        {"field_map", field_map},
        {"limit", limit ? std::to_string(*limit) : "none"},
        {"model_name", generation.model_name},
        {"temperature", format_double(generation.temperature)},
        {"max_output_tokens", std::to_string(generation.max_output_tokens)},
        {"request_timeout_s", format_double(generation.request_timeout_s)},
        {"max_retries", std::to_string(generation.max_retries)},
        {"retry_backoff_s", format_double(generation.retry_backoff_s)},
        {"base_url", base_url},
        {"max_in_flight", std::to_string(max_in_flight)},
        {"cache_dir", cache_dir},
        {"prompt_dir", prompt_dir},
        {"mock_script", mock_script},
        {"rounds", std::to_string(rounds)},
        {"threads", std::to_string(threads)},
        {"fail_policy", std::string(to_string(fail_policy))},
        {"positive_class", std::to_string(positive_class)},
        {"abbreviations_file", abbreviations_file},
        {"min_sentence_chars", std::to_string(min_sentence_chars)},
        {"newline_boundary", newline_boundary ? "true" : "false"},
        {"out", out},
        {"label_aggregation", "mean"},
    };
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto trimmed = normalize_whitespace(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = normalize_whitespace(trimmed.substr(0, eq));
        if (key == "label_aggregation") continue;
        try {
            cfg.set(key, trimmed.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileMissing, "cannot open config " + path.string());
    std::ostringstream content;
    content << in.rdbuf();
    apply_config_text(cfg, content.str());
}

}  // namespace dcr
