#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcr {

/// Which family of prompts drives the evaluator and improver.
enum class TaskKind {
    SemanticPair,
    SummarizationConsistency,
    ParagraphLevelConsistency,
};

std::string_view to_string(TaskKind task);

/// Accepts the canonical names above as well as the short forms
/// "semantic", "summarization" and "paragraph".
TaskKind parse_task_kind(std::string_view text);

/// One reference/candidate pair. `binary_label` marks labels that must be
/// exactly 0 or 1 (paraphrase and QAGS-XSUM style data).
struct EvaluationItem {
    std::string item_id;
    std::string reference;
    std::string candidate;
    std::optional<double> human_label;
    bool binary_label = false;

    bool operator==(const EvaluationItem&) const = default;
};

/// A reason produced by the evaluator for one candidate sentence.
///
/// `sentence_level` is false when the entry could not be tied to a single
/// candidate sentence (it talks about the whole text, or its sentence does
/// not match anything in the local split). Such entries are cancelled out of
/// the score.
struct SentenceVerdict {
    std::string sentence;
    std::string reason;
    std::optional<int> polarity;
    bool sentence_level = true;

    bool operator==(const SentenceVerdict&) const = default;
};

/// Aggregated score: raw = (sum(z) + alpha) / (k + beta), final = (raw + 1) / 2.
struct ConsistencyScore {
    std::vector<int> z;
    double alpha = 0.0;
    double beta = 0.0;
    int k = 0;
    double raw = 0.0;
    double final_score = 0.0;

    bool operator==(const ConsistencyScore&) const = default;
};

struct Rewrite {
    std::string original;
    std::string improved;
    std::string reason;

    bool operator==(const Rewrite&) const = default;
};

/// State of one evaluate/score/improve round for a single item.
struct RoundRecord {
    int round_index = 1;
    std::vector<std::string> sentences;
    std::vector<SentenceVerdict> verdicts;
    ConsistencyScore score;
    std::vector<Rewrite> rewritten_sentences;
    bool converged = false;
    /// The evaluator's own yes/no answer. The score is authoritative; this is
    /// kept so the two can be compared.
    bool dce_consistent = false;

    bool operator==(const RoundRecord&) const = default;
};

struct ItemResult {
    std::string item_id;
    std::optional<double> human_label;
    bool binary_label = false;
    std::vector<RoundRecord> rounds;
    double seconds = 0.0;

    /// Score of the candidate as originally given (round 1).
    double initial_score() const;
    /// Score after the last executed round.
    double final_score() const;

    bool operator==(const ItemResult&) const = default;
};

struct ItemFailure {
    std::string item_id;
    std::string message;

    bool operator==(const ItemFailure&) const = default;
};

struct Correlations {
    double pearson = 0.0;
    double spearman = 0.0;
    double kendall_tau = 0.0;

    bool operator==(const Correlations&) const = default;
};

/// Undefined metrics (zero denominators) are left empty rather than zeroed.
struct Classification {
    std::optional<double> f1;
    std::optional<double> precision;
    std::optional<double> recall;
    int positive_class = 1;

    bool operator==(const Classification&) const = default;
};

struct Improvement {
    std::size_t inconsistent = 0;
    std::size_t corrected = 0;
    double rate = 0.0;

    bool operator==(const Improvement&) const = default;
};

struct RunReport {
    std::vector<ItemResult> per_item;
    std::vector<ItemFailure> failures;
    std::optional<Correlations> correlations;
    std::optional<double> auroc;
    std::optional<Classification> classification;
    std::optional<Improvement> improvement;
    double total_seconds = 0.0;
    std::map<std::string, std::string> config_echo;

    bool operator==(const RunReport&) const = default;
};

/// Returns the item unchanged, or throws EmptyText / BadLabel.
EvaluationItem validate_item(EvaluationItem item);

}  // namespace dcr
