#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dcr/dataset.hpp"
#include "dcr/gateway.hpp"
#include "dcr/model.hpp"
#include "dcr/pipeline.hpp"

namespace dcr {

/// Everything needed to reproduce a run. Serialized as key=value pairs into
/// the report's config_echo.
struct RunConfig {
    TaskKind task = TaskKind::SummarizationConsistency;
    std::string dataset;
    DatasetFamily family = DatasetFamily::GenericPairs;
    std::string field_map;
    std::optional<std::size_t> limit;

    GenerationSettings generation;
    std::string base_url = "https://api.openai.com/v1";
    int max_in_flight = 0;
    std::string cache_dir;
    std::string prompt_dir;
    std::string mock_script;

    int rounds = 3;
    int threads = 1;
    FailPolicy fail_policy = FailPolicy::Skip;
    int positive_class = 1;

    std::string abbreviations_file;
    int min_sentence_chars = 2;
    bool newline_boundary = false;

    std::string out = "runs/latest";

    /// Applies one key. Throws InvalidArgument for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);

    std::map<std::string, std::string> to_pairs() const;
};

/// Applies `key=value` lines; '#' starts a comment. Throws InvalidArgument
/// with the offending line number.
void apply_config_text(RunConfig& cfg, std::string_view text);

/// Throws FileMissing or InvalidArgument.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace dcr
