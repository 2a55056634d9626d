#include <chrono>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dcr/error.hpp"
#include "dcr/pipeline.hpp"
#include "dcr/serialization.hpp"
#include "support.hpp"

using namespace dcr;
using nlohmann::json;
using testing_support::MockEnv;
using testing_support::substring;
using testing_support::TempDir;

namespace {

std::string join(const std::vector<std::string>& sentences) {
    std::string out;
    for (const auto& s : sentences) out += (out.empty() ? "" : " ") + s;
    return out;
}

std::string reason_for(const std::string& sentence, int mark) {
    return (mark > 0 ? "Supported: " : "Unsupported: ") + sentence;
}

/// Rules for one evaluation round of one candidate.
void script_round(std::vector<MockRule>& rules, const std::vector<std::string>& sentences, const std::vector<int>& marks) {
    json entries = json::array();
    std::string block;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto reason = reason_for(sentences[i], marks[i]);
        entries.push_back({{"sentence", sentences[i]}, {"reason", reason}});
        block += (block.empty() ? "*" : ",\n*") + json(reason).dump();
    }
    const bool ok = std::all_of(marks.begin(), marks.end(), [](int m) { return m == 1; });
    rules.push_back(substring("## Summary ##\n" + join(sentences) + "\n", json{{"reason", entries}, {"is_consistent", ok}}.dump()));
    rules.push_back(substring("## Attempt Answer ##:\n" + block + "\n", json(marks).dump()));
}

/// Rules for the improver seeing `sentences` with `marks` and returning `fixed`.
void script_fix(std::vector<MockRule>& rules, const std::vector<std::string>& sentences, const std::vector<int>& marks,
                const std::vector<std::string>& fixed) {
    json listing = json::array();
    json reply = json::array();
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        listing.push_back({{"sentence", sentences[i]}, {"reason", reason_for(sentences[i], marks[i])}});
        reply.push_back({{"sentence", sentences[i]}, {"improved_sentence", fixed[i]}, {"reason", "fixed"}});
    }
    rules.push_back(substring("Sentences\n" + listing.dump() + "\n", reply.dump()));
}

PipelineConfig improving(int rounds) {
    PipelineConfig cfg;
    cfg.improve = true;
    cfg.max_rounds = rounds;
    return cfg;
}

EvaluationItem item(std::string id, std::string candidate) { return {std::move(id), "Reference text.", std::move(candidate), std::nullopt, false}; }

std::vector<MockRule> two_round_script() {
    std::vector<MockRule> rules;
    script_round(rules, {"A cat flew.", "A dog ran."}, {-1, 1});
    script_fix(rules, {"A cat flew.", "A dog ran."}, {-1, 1}, {"A cat sat.", "A dog ran."});
    script_round(rules, {"A cat sat.", "A dog ran."}, {1, 1});
    return rules;
}

// Eight items: half consistent, half fixed in one round.
std::vector<MockRule> batch_script(std::vector<EvaluationItem>& items) {
    std::vector<MockRule> rules;
    for (int i = 0; i < 8; ++i) {
        const auto good = "Item " + std::to_string(i) + " is fine.";
        const auto bad = "Item " + std::to_string(i) + " is wrong.";
        if (i % 2 == 0) {
            script_round(rules, {good}, {1});
            items.push_back(item("i" + std::to_string(i), good));
        } else {
            script_round(rules, {bad, good}, {-1, 1});
            script_fix(rules, {bad, good}, {-1, 1}, {"Item " + std::to_string(i) + " is right.", good});
            script_round(rules, {"Item " + std::to_string(i) + " is right.", good}, {1, 1});
            items.push_back(item("i" + std::to_string(i), bad + " " + good));
        }
    }
    return rules;
}

json without_timing(const RunReport& r) {
    auto j = json(r);
    j.erase("timing");
    return j;
}

}  // namespace

TEST(Pipeline, TwoRoundTrace) {
    MockEnv env(two_round_script());
    const auto rounds = run_item(item("x", "A cat flew. A dog ran."), improving(3), env.ctx);
    ASSERT_EQ(rounds.size(), 2u);
    EXPECT_EQ(rounds[0].score.final_score, 0.5);
    EXPECT_FALSE(rounds[0].converged);
    ASSERT_EQ(rounds[0].rewritten_sentences.size(), 2u);
    EXPECT_EQ(rounds[0].rewritten_sentences[0].improved, "A cat sat.");
    EXPECT_EQ(rounds[1].score.final_score, 1.0);
    EXPECT_TRUE(rounds[1].converged);
    EXPECT_EQ(rounds[1].sentences, (std::vector<std::string>{"A cat sat.", "A dog ran."}));
    EXPECT_EQ(rounds[1].round_index, 2);
}

TEST(Pipeline, ConsistentCandidateStopsWithoutImprover) {
    std::vector<MockRule> rules;
    script_round(rules, {"All good."}, {1});
    MockEnv env(rules);
    const auto rounds = run_item(item("x", "All good."), improving(3), env.ctx);
    ASSERT_EQ(rounds.size(), 1u);
    EXPECT_EQ(rounds[0].score.final_score, 1.0);
    EXPECT_TRUE(rounds[0].rewritten_sentences.empty());
    EXPECT_EQ(env.backend->call_count(), 2u);
}

TEST(Pipeline, SingleRoundBudget) {
    MockEnv env(two_round_script());
    const auto rounds = run_item(item("x", "A cat flew. A dog ran."), improving(1), env.ctx);
    ASSERT_EQ(rounds.size(), 1u);
    EXPECT_FALSE(rounds[0].converged);
    EXPECT_EQ(env.backend->call_count(), 2u);
}

TEST(Pipeline, EvaluateOnlyIsOneRound) {
    MockEnv env(two_round_script());
    PipelineConfig cfg;
    cfg.max_rounds = 5;
    const auto rounds = run_item(item("x", "A cat flew. A dog ran."), cfg, env.ctx);
    EXPECT_EQ(rounds.size(), 1u);
}

TEST(Pipeline, AgentFailureBecomesItemFailed) {
    MockEnv env({});
    try {
        run_item(item("x", "Text."), improving(2), env.ctx);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ItemFailed);
        EXPECT_NE(std::string(e.what()).find("MockMiss"), std::string::npos);
    }
}

TEST(Pipeline, InvalidConfig) {
    MockEnv env({});
    PipelineConfig cfg = improving(0);
    EXPECT_THROW(run_item(item("x", "Text."), cfg, env.ctx), Error);
    cfg = improving(1);
    cfg.worker_count = 0;
    EXPECT_THROW(run_batch({}, cfg, env.ctx), Error);
}

TEST(Batch, EmptyInput) {
    MockEnv env({});
    const auto report = run_batch({}, improving(2), env.ctx);
    EXPECT_TRUE(report.per_item.empty());
    EXPECT_EQ(report.total_seconds, 0.0);
}

TEST(Batch, ThreadCountDoesNotChangeResults) {
    std::vector<EvaluationItem> items;
    const auto rules = batch_script(items);
    TempDir cache;
    MockEnv serial(rules, {cache.path(), 0});
    MockEnv parallel(rules, {cache.path(), 0});
    auto cfg = improving(3);
    const auto one = run_batch(items, cfg, serial.ctx);
    cfg.worker_count = 4;
    const auto four = run_batch(items, cfg, parallel.ctx);
    ASSERT_EQ(one.per_item.size(), 8u);
    EXPECT_EQ(without_timing(one), without_timing(four));
    for (std::size_t i = 0; i < items.size(); ++i) EXPECT_EQ(four.per_item[i].item_id, items[i].item_id);
    EXPECT_EQ(parallel.gateway.stats().hit_rate(), 1.0);
}

TEST(Batch, WorkersOverlapBackendLatency) {
    std::vector<EvaluationItem> items;
    const auto rules = batch_script(items);
    MockEnv env(rules);
    env.backend->set_latency(std::chrono::milliseconds(50));
    PipelineConfig cfg;
    cfg.worker_count = 4;
    const auto start = std::chrono::steady_clock::now();
    const auto report = run_batch(items, cfg, env.ctx);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Two calls per item: serial is 8 * 2 * 50 ms; four workers need two waves.
    EXPECT_EQ(report.failures.size(), 0u);
    EXPECT_GE(elapsed, 0.2);
    EXPECT_LT(elapsed, 0.4);
}

TEST(Batch, SkipPolicyIsolatesFailures) {
    std::vector<EvaluationItem> items;
    const auto rules = batch_script(items);
    items.insert(items.begin() + 3, item("broken", "Nobody scripted this."));
    MockEnv env(rules);
    auto cfg = improving(3);
    cfg.worker_count = 3;
    const auto report = run_batch(items, cfg, env.ctx);
    ASSERT_EQ(report.failures.size(), 1u);
    EXPECT_EQ(report.failures[0].item_id, "broken");
    ASSERT_EQ(report.per_item.size(), 8u);
    for (const auto& r : report.per_item) {
        EXPECT_EQ(r.final_score(), 1.0);
        for (std::size_t k = 1; k < r.rounds.size(); ++k) EXPECT_GE(r.rounds[k].score.final_score, r.rounds[k - 1].score.final_score);
    }
}

TEST(Batch, AbortPolicyStops) {
    std::vector<EvaluationItem> items;
    const auto rules = batch_script(items);
    items.push_back(item("broken", "Nobody scripted this."));
    MockEnv env(rules);
    auto cfg = improving(3);
    cfg.fail_policy = FailPolicy::Abort;
    try {
        run_batch(items, cfg, env.ctx);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Aborted);
        EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
    }
}

TEST(Batch, ProgressLogHasOneLinePerItem) {
    std::vector<EvaluationItem> items;
    const auto rules = batch_script(items);
    MockEnv env(rules);
    TempDir run;
    auto cfg = improving(3);
    cfg.worker_count = 2;
    cfg.run_dir = run.path();
    run_batch(items, cfg, env.ctx);
    std::istringstream lines(testing_support::read_text(run / "progress.jsonl"));
    std::set<std::string> ids;
    for (std::string line; std::getline(lines, line);) {
        const auto j = json::parse(line);
        ids.insert(j.at("item_id").get<std::string>());
        EXPECT_TRUE(j.contains("rounds") && j.contains("final") && j.contains("seconds"));
    }
    EXPECT_EQ(ids.size(), 8u);
}

TEST(Divide, ParagraphTaskKeepsWholeText) {
    PipelineConfig cfg;
    cfg.task = TaskKind::ParagraphLevelConsistency;
    EXPECT_EQ(divide_candidate(" One.  Two. ", cfg), (std::vector<std::string>{"One. Two."}));
    cfg.task = TaskKind::SummarizationConsistency;
    EXPECT_EQ(divide_candidate("One. Two.", cfg).size(), 2u);
}
