#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dcr/gateway.hpp"
#include "dcr/model.hpp"
#include "dcr/prompts.hpp"

namespace dcr {

// ---------------------------------------------------------------------------
// Parsed agent outputs

struct DceEntry {
    std::string sentence;
    std::string reason;
    /// False when the model returned a bare reason string with no sentence.
    bool has_sentence = true;

    bool operator==(const DceEntry&) const = default;
};

struct DceOutput {
    std::vector<DceEntry> verdict_entries;
    bool is_consistent = false;
};

struct AmcOutput {
    std::vector<int> marks;
    std::vector<std::string> rationale;
};

struct RaiEntry {
    std::string sentence;
    std::string improved_sentence;
    std::string reason;

    bool operator==(const RaiEntry&) const = default;
};

struct RaiOutput {
    std::vector<RaiEntry> rewrites;
};

inline constexpr std::string_view kAlreadyConsistent = "ALREADY CONSISTENT";
inline constexpr std::string_view kJsonRetrySuffix = "\n\nReturn only valid JSON.";

/// Evaluator reply: {"reason": [{"sentence", "reason"}...], "is_consistent": bool}.
/// The paragraph prompt's single-object form and bare reason strings are
/// accepted too. Throws ParseError or SchemaError.
DceOutput parse_dce_output(std::string_view raw);

/// Converter reply: {"reason": [...], "answer": [marks]} or a bare array.
/// Throws ParseError, SchemaError, LengthMismatch or BadMark.
AmcOutput parse_amc_output(std::string_view raw, std::size_t expected_count);

/// Sentence-level improver reply: [{"sentence", "improved_sentence", "reason"}...].
RaiOutput parse_rai_output(std::string_view raw, std::size_t expected_count);

/// Paragraph-level improver reply: {"sentence", "improved_summary", "reason"}.
RaiEntry parse_rai_paragraph_output(std::string_view raw);

// ---------------------------------------------------------------------------
// Agents

/// What every agent call needs. The gateway and registry must outlive it.
struct AgentContext {
    LlmGateway& gateway;
    const PromptRegistry& prompts;
    GenerationSettings settings;
};

struct DceResult {
    std::vector<SentenceVerdict> verdicts;
    bool is_consistent = false;
};

/// Key used to align model-echoed sentences with the local split: ASCII
/// lowercase, whitespace removed, trailing terminators dropped.
std::string sentence_match_key(std::string_view sentence);

/// True when a reason talks about the whole text rather than one sentence.
bool has_paragraph_scope(std::string_view reason);

/// Divide-and-conquer evaluation of the candidate against the reference.
/// Each returned verdict is aligned to a local sentence (its `sentence` is
/// then that local sentence verbatim) or marked `sentence_level = false`.
DceResult run_dce(const AgentContext& ctx, std::string_view reference,
                  const std::vector<std::string>& candidate_sentences, TaskKind task);

/// Classifies each reason as +1 / -1; alignment is positional.
std::vector<SentenceVerdict> run_amc(const AgentContext& ctx, std::vector<SentenceVerdict> verdicts);

/// Score with non-sentence-level entries cancelled:
/// alpha = -sum(z excluded), beta = -count(excluded).
/// Throws AllExcluded when nothing is left to score.
ConsistencyScore compute_score(const std::vector<SentenceVerdict>& verdicts);

/// Rewrites the sentence-level verdicts (or the whole candidate for the
/// paragraph task). Consistent sentences come back verbatim whatever the
/// model returned; no call is made when nothing is inconsistent.
std::vector<Rewrite> run_rai(const AgentContext& ctx, std::string_view reference,
                             const std::vector<SentenceVerdict>& verdicts, TaskKind task);

}  // namespace dcr
