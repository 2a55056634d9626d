#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "dcr/agents.hpp"
#include "dcr/model.hpp"
#include "dcr/segmenter.hpp"

namespace dcr {

enum class FailPolicy { Skip, Abort };

std::string_view to_string(FailPolicy policy);
FailPolicy parse_fail_policy(std::string_view text);

struct PipelineConfig {
    int max_rounds = 1;
    TaskKind task = TaskKind::SummarizationConsistency;
    /// false: evaluate only (exactly one round, no rewriting).
    bool improve = false;
    int worker_count = 1;
    FailPolicy fail_policy = FailPolicy::Skip;
    SegmentationConfig segmentation = SegmentationConfig::defaults();
    /// When set, one JSON line per finished item is appended to
    /// `<run_dir>/progress.jsonl`.
    std::optional<std::filesystem::path> run_dir;

    /// Throws InvalidArgument.
    void validate() const;
};

/// Candidate units for a round: sentences, or the whole text for the
/// paragraph-level task.
std::vector<std::string> divide_candidate(std::string_view candidate, const PipelineConfig& cfg);

/// Evaluate, score and (optionally) improve one item until its score reaches
/// 1 or the round budget is spent. Agent failures surface as ItemFailed.
std::vector<RoundRecord> run_item(const EvaluationItem& item, const PipelineConfig& cfg, const AgentContext& ctx);

/// Runs every item on a pool of `cfg.worker_count` threads. Results keep
/// input order. Under FailPolicy::Skip failures are listed in the report;
/// under Abort the first failure stops the batch and raises Aborted.
/// Aggregate metrics are left empty.
RunReport run_batch(const std::vector<EvaluationItem>& items, const PipelineConfig& cfg, const AgentContext& ctx);

}  // namespace dcr
