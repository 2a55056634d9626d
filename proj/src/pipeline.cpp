#include "dcr/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "dcr/error.hpp"

namespace dcr {

using json = nlohmann::json;

std::string_view to_string(FailPolicy policy) { return policy == FailPolicy::Skip ? "skip" : "abort"; }

FailPolicy parse_fail_policy(std::string_view text) {
    if (text == "skip") return FailPolicy::Skip;
    if (text == "abort") return FailPolicy::Abort;
    throw Error(ErrorCode::InvalidArgument, "fail policy must be 'skip' or 'abort', got '" + std::string(text) + "'");
}

void PipelineConfig::validate() const {
    if (max_rounds < 1) throw Error(ErrorCode::InvalidArgument, "max_rounds must be at least 1");
    if (worker_count < 1) throw Error(ErrorCode::InvalidArgument, "worker_count must be at least 1");
}

std::vector<std::string> divide_candidate(std::string_view candidate, const PipelineConfig& cfg) {
    if (cfg.task == TaskKind::ParagraphLevelConsistency) {
        auto whole = normalize_whitespace(candidate);
        if (whole.empty()) throw Error(ErrorCode::NoSentences, "candidate is blank");
        return {std::move(whole)};
    }
    return split_sentences(candidate, cfg.segmentation);
}

namespace {

// Replaces each rewritten sentence in place, in order; duplicates are
// consumed one rewrite at a time.
std::string apply_rewrites(const std::vector<std::string>& sentences, const std::vector<Rewrite>& rewrites) {
    std::vector<bool> used(rewrites.size(), false);
    std::string out;
    for (const auto& sentence : sentences) {
        const std::string* replacement = &sentence;
        for (std::size_t i = 0; i < rewrites.size(); ++i) {
            if (!used[i] && rewrites[i].original == sentence) {
                used[i] = true;
                replacement = &rewrites[i].improved;
                break;
            }
        }
        if (replacement->empty()) continue;
        if (!out.empty()) out += ' ';
        out += *replacement;
    }
    return out;
}

std::vector<RoundRecord> run_rounds(const EvaluationItem& item, const PipelineConfig& cfg, const AgentContext& ctx) {
    const int rounds = cfg.improve ? cfg.max_rounds : 1;
    std::vector<RoundRecord> records;
    std::string candidate = item.candidate;
    for (int r = 1; r <= rounds; ++r) {
        RoundRecord record;
        record.round_index = r;
        record.sentences = divide_candidate(candidate, cfg);
        auto dce = run_dce(ctx, item.reference, record.sentences, cfg.task);
        record.dce_consistent = dce.is_consistent;
        record.verdicts = run_amc(ctx, std::move(dce.verdicts));
        record.score = compute_score(record.verdicts);
        record.converged = record.score.final_score == 1.0;
        if (record.converged != record.dce_consistent) {
            spdlog::debug("item '{}' round {}: evaluator says {} but score is {:.4f}", item.item_id, r,
                         record.dce_consistent ? "consistent" : "inconsistent", record.score.final_score);
        }

        const bool last = record.converged || r == rounds;
        if (!last) {
            record.rewritten_sentences = run_rai(ctx, item.reference, record.verdicts, cfg.task);
            if (cfg.task == TaskKind::ParagraphLevelConsistency) {
                candidate = record.rewritten_sentences.front().improved;
            } else {
                candidate = apply_rewrites(record.sentences, record.rewritten_sentences);
            }
        }
        records.push_back(std::move(record));
        if (last) break;
    }
    return records;
}

}  // namespace

std::vector<RoundRecord> run_item(const EvaluationItem& item, const PipelineConfig& cfg, const AgentContext& ctx) {
    cfg.validate();
    try {
        return run_rounds(validate_item(item), cfg, ctx);
    } catch (const Error& e) {
        throw Error(ErrorCode::ItemFailed, "item '" + item.item_id + "': " + e.what());
    }
}

RunReport run_batch(const std::vector<EvaluationItem>& items, const PipelineConfig& cfg, const AgentContext& ctx) {
    cfg.validate();
    RunReport report;
    if (items.empty()) return report;

    using clock = std::chrono::steady_clock;
    const auto started = clock::now();

    std::optional<std::filesystem::path> progress_path;
    if (cfg.run_dir) {
        std::filesystem::create_directories(*cfg.run_dir);
        progress_path = *cfg.run_dir / "progress.jsonl";
    }
    std::mutex progress_mutex;

    std::vector<std::optional<ItemResult>> results(items.size());
    std::vector<std::optional<ItemFailure>> failures(items.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        while (!stop.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            const auto& item = items[i];
            const auto item_started = clock::now();
            try {
                ItemResult result;
                result.item_id = item.item_id;
                result.human_label = item.human_label;
                result.binary_label = item.binary_label;
                result.rounds = run_item(item, cfg, ctx);
                result.seconds = std::chrono::duration<double>(clock::now() - item_started).count();
                if (progress_path) {
                    const json line = {{"item_id", result.item_id},
                                       {"rounds", result.rounds.size()},
                                       {"final", result.final_score()},
                                       {"seconds", result.seconds}};
                    std::lock_guard lock(progress_mutex);
                    std::ofstream(*progress_path, std::ios::app) << line.dump() << '\n';
                }
                results[i] = std::move(result);
            } catch (const std::exception& e) {
                spdlog::error("{}", e.what());
                failures[i] = ItemFailure{item.item_id, e.what()};
                if (cfg.fail_policy == FailPolicy::Abort) stop.store(true);
            }
        }
    };

    const auto thread_count = std::min<std::size_t>(static_cast<std::size_t>(cfg.worker_count), items.size());
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < items.size(); ++i) {
        if (failures[i]) {
            if (cfg.fail_policy == FailPolicy::Abort) throw Error(ErrorCode::Aborted, failures[i]->message);
            report.failures.push_back(std::move(*failures[i]));
        } else if (results[i]) {
            report.per_item.push_back(std::move(*results[i]));
        }
    }
    report.total_seconds = std::chrono::duration<double>(clock::now() - started).count();
    return report;
}

}  // namespace dcr
