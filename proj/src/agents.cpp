#include "dcr/agents.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "dcr/error.hpp"
#include "dcr/json_extract.hpp"
#include "dcr/segmenter.hpp"

namespace dcr {

using json = nlohmann::json;

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string string_field(const json& obj, std::initializer_list<const char*> keys, const char* what) {
    for (const char* key : keys) {
        const auto it = obj.find(key);
        if (it == obj.end()) continue;
        if (!it->is_string()) throw Error(ErrorCode::SchemaError, std::string(what) + " field '" + key + "' is not a string");
        return it->get<std::string>();
    }
    throw Error(ErrorCode::SchemaError, std::string(what) + " entry lacks '" + *keys.begin() + "'");
}

DceEntry dce_entry(const json& value) {
    if (value.is_string()) return DceEntry{"", value.get<std::string>(), false};
    if (!value.is_object()) throw Error(ErrorCode::SchemaError, "evaluator entry is neither an object nor a string");
    DceEntry entry;
    entry.reason = string_field(value, {"reason"}, "evaluator");
    const auto it = value.find("sentence");
    if (it != value.end() && it->is_string()) {
        entry.sentence = it->get<std::string>();
    } else {
        entry.has_sentence = false;
    }
    return entry;
}

int parse_mark(const json& value) {
    if (value.is_number()) {
        const double v = value.get<double>();
        if (v == 1.0) return 1;
        if (v == -1.0) return -1;
    } else if (value.is_string()) {
        const auto s = normalize_whitespace(value.get<std::string>());
        if (s == "1" || s == "+1") return 1;
        if (s == "-1") return -1;
    }
    throw Error(ErrorCode::BadMark, "mark " + value.dump() + " is not -1 or +1");
}

bool says_already_consistent(std::string_view reason) {
    return ascii_lower(reason).find(ascii_lower(kAlreadyConsistent)) != std::string::npos;
}

// Issues the prompt; on ParseError re-issues it once with a JSON-only nudge.
template <typename Parse>
auto ask(const AgentContext& ctx, const std::string& prompt, Parse parse) {
    const auto first = ctx.gateway.complete(CompletionRequest::make(prompt, ctx.settings));
    try {
        return parse(first.text);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ParseError) throw;
        spdlog::warn("unparseable model output, retrying once: {}", e.what());
    }
    const auto second = ctx.gateway.complete(CompletionRequest::make(prompt + std::string(kJsonRetrySuffix), ctx.settings));
    return parse(second.text);
}

std::string join_sentences(const std::vector<std::string>& sentences) {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsers

DceOutput parse_dce_output(std::string_view raw) {
    const auto doc = extract_json(raw, JsonShape::Object);
    const json* reasons = nullptr;
    for (const char* key : {"reason", "reasons"}) {
        if (auto it = doc.find(key); it != doc.end()) {
            reasons = &*it;
            break;
        }
    }
    if (!reasons) throw Error(ErrorCode::SchemaError, "evaluator output lacks 'reason'");
    const auto flag = doc.find("is_consistent");
    if (flag == doc.end()) throw Error(ErrorCode::SchemaError, "evaluator output lacks 'is_consistent'");

    DceOutput out;
    if (flag->is_boolean()) {
        out.is_consistent = flag->get<bool>();
    } else if (flag->is_string() && (ascii_lower(flag->get<std::string>()) == "true" || ascii_lower(flag->get<std::string>()) == "false")) {
        out.is_consistent = ascii_lower(flag->get<std::string>()) == "true";
    } else {
        throw Error(ErrorCode::SchemaError, "'is_consistent' is not a boolean");
    }

    if (reasons->is_array()) {
        for (const auto& item : *reasons) out.verdict_entries.push_back(dce_entry(item));
    } else {
        out.verdict_entries.push_back(dce_entry(*reasons));
    }
    if (out.verdict_entries.empty()) throw Error(ErrorCode::SchemaError, "evaluator returned no reasons");
    return out;
}

AmcOutput parse_amc_output(std::string_view raw, std::size_t expected_count) {
    const auto doc = extract_json(raw, JsonShape::Any);
    const json* marks = nullptr;
    AmcOutput out;
    if (doc.is_array()) {
        marks = &doc;
    } else {
        for (const char* key : {"answer", "marks"}) {
            if (auto it = doc.find(key); it != doc.end()) {
                marks = &*it;
                break;
            }
        }
        if (auto it = doc.find("reason"); it != doc.end() && it->is_array()) {
            for (const auto& r : *it) out.rationale.push_back(r.is_string() ? r.get<std::string>() : r.dump());
        }
    }
    if (!marks || !marks->is_array()) throw Error(ErrorCode::SchemaError, "converter output lacks an 'answer' array");
    for (const auto& m : *marks) out.marks.push_back(parse_mark(m));
    if (out.marks.size() != expected_count) {
        throw Error(ErrorCode::LengthMismatch, "converter returned " + std::to_string(out.marks.size()) +
                                                   " marks for " + std::to_string(expected_count) + " reasons");
    }
    return out;
}

RaiOutput parse_rai_output(std::string_view raw, std::size_t expected_count) {
    const auto doc = extract_json(raw, JsonShape::Any);
    std::vector<const json*> items;
    if (doc.is_array()) {
        for (const auto& item : doc) items.push_back(&item);
    } else {
        items.push_back(&doc);
    }
    RaiOutput out;
    for (const auto* item : items) {
        if (!item->is_object()) throw Error(ErrorCode::SchemaError, "improver entry is not an object");
        RaiEntry entry;
        entry.sentence = item->contains("sentence") ? string_field(*item, {"sentence"}, "improver") : std::string();
        entry.improved_sentence = string_field(*item, {"improved_sentence", "improved_summary"}, "improver");
        entry.reason = item->contains("reason") ? string_field(*item, {"reason"}, "improver") : std::string();
        out.rewrites.push_back(std::move(entry));
    }
    if (out.rewrites.size() != expected_count) {
        throw Error(ErrorCode::LengthMismatch, "improver returned " + std::to_string(out.rewrites.size()) +
                                                   " rewrites for " + std::to_string(expected_count) + " sentences");
    }
    return out;
}

RaiEntry parse_rai_paragraph_output(std::string_view raw) {
    const auto doc = extract_json(raw, JsonShape::Object);
    RaiEntry entry;
    entry.sentence = doc.contains("sentence") ? string_field(doc, {"sentence"}, "improver") : std::string();
    entry.improved_sentence = string_field(doc, {"improved_summary", "improved_sentence"}, "improver");
    entry.reason = doc.contains("reason") ? string_field(doc, {"reason"}, "improver") : std::string();
    return entry;
}

// ---------------------------------------------------------------------------
// Alignment helpers

std::string sentence_match_key(std::string_view sentence) {
    std::string key;
    key.reserve(sentence.size());
    for (char c : sentence) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    while (!key.empty() && (key.back() == '.' || key.back() == '!' || key.back() == '?')) key.pop_back();
    return key;
}

bool has_paragraph_scope(std::string_view reason) {
    static constexpr std::array<std::string_view, 14> kPhrases = {
        "the two paragraphs",
        "both paragraphs",
        "the two texts",
        "this summary is consistent",
        "this summary is not consistent",
        "the summary is consistent",
        "the summary is not consistent",
        "the whole summary",
        "the entire summary",
        "the summary as a whole",
        "the paragraph as a whole",
        "the attempt answer as a whole",
        "overall, the summary",
        "overall, the attempt answer",
    };
    const auto lower = ascii_lower(reason);
    return std::any_of(kPhrases.begin(), kPhrases.end(),
                       [&](std::string_view p) { return lower.find(p) != std::string::npos; });
}

// ---------------------------------------------------------------------------
// Agents

DceResult run_dce(const AgentContext& ctx, std::string_view reference,
                  const std::vector<std::string>& candidate_sentences, TaskKind task) {
    if (candidate_sentences.empty()) throw Error(ErrorCode::InvalidArgument, "no candidate sentences to evaluate");
    const auto candidate = join_sentences(candidate_sentences);

    std::string prompt;
    switch (task) {
        case TaskKind::SemanticPair:
            prompt = ctx.prompts.render(TemplateId::DceSemantic,
                                        {{"true_answer", std::string(reference)}, {"answer_to_evaluate", candidate}});
            break;
        case TaskKind::SummarizationConsistency:
            prompt = ctx.prompts.render(TemplateId::DceSummarization, {{"article", std::string(reference)}, {"summary", candidate}});
            break;
        case TaskKind::ParagraphLevelConsistency:
            prompt = ctx.prompts.render(TemplateId::DceParagraph, {{"article", std::string(reference)}, {"summary", candidate}});
            break;
    }

    const auto output = ask(ctx, prompt, [](const std::string& text) { return parse_dce_output(text); });

    std::vector<std::string> keys;
    keys.reserve(candidate_sentences.size());
    for (const auto& s : candidate_sentences) keys.push_back(sentence_match_key(s));

    DceResult result;
    result.is_consistent = output.is_consistent;
    for (const auto& entry : output.verdict_entries) {
        SentenceVerdict verdict;
        verdict.reason = entry.reason;
        verdict.sentence = entry.sentence;
        if (task == TaskKind::ParagraphLevelConsistency) {
            // The whole candidate is the unit being judged.
            verdict.sentence = candidate_sentences.front();
            verdict.sentence_level = true;
        } else if (!entry.has_sentence) {
            verdict.sentence_level = !has_paragraph_scope(entry.reason);
        } else {
            const auto key = sentence_match_key(entry.sentence);
            const auto it = std::find(keys.begin(), keys.end(), key);
            verdict.sentence_level = it != keys.end() && !has_paragraph_scope(entry.reason);
            if (it != keys.end()) verdict.sentence = candidate_sentences[static_cast<std::size_t>(it - keys.begin())];
        }
        result.verdicts.push_back(std::move(verdict));
    }
    return result;
}

std::vector<SentenceVerdict> run_amc(const AgentContext& ctx, std::vector<SentenceVerdict> verdicts) {
    if (verdicts.empty()) throw Error(ErrorCode::LengthMismatch, "no reasons to convert");
    std::string paragraphs;
    for (const auto& v : verdicts) {
        if (normalize_whitespace(v.reason).empty()) throw Error(ErrorCode::SchemaError, "verdict has an empty reason");
        if (!paragraphs.empty()) paragraphs += ",\n";
        paragraphs += "*" + json(v.reason).dump();
    }
    const auto prompt = ctx.prompts.render(TemplateId::Amc, {{"attempt_answer", paragraphs}});
    const auto count = verdicts.size();
    const auto output = ask(ctx, prompt, [count](const std::string& text) { return parse_amc_output(text, count); });
    for (std::size_t i = 0; i < count; ++i) verdicts[i].polarity = output.marks[i];
    return verdicts;
}

ConsistencyScore compute_score(const std::vector<SentenceVerdict>& verdicts) {
    if (verdicts.empty()) throw Error(ErrorCode::AllExcluded, "no verdicts to score");
    ConsistencyScore score;
    int total = 0;
    int excluded_sum = 0;
    int excluded_count = 0;
    for (const auto& v : verdicts) {
        if (!v.polarity) throw Error(ErrorCode::InvalidArgument, "verdict has no polarity");
        const int z = *v.polarity;
        if (z != 1 && z != -1) throw Error(ErrorCode::BadMark, "polarity " + std::to_string(z) + " is not -1 or +1");
        score.z.push_back(z);
        total += z;
        if (!v.sentence_level) {
            excluded_sum += z;
            ++excluded_count;
        }
    }
    score.k = static_cast<int>(verdicts.size());
    score.alpha = -static_cast<double>(excluded_sum);
    score.beta = -static_cast<double>(excluded_count);
    const double denominator = score.k + score.beta;
    if (denominator <= 0.0) throw Error(ErrorCode::AllExcluded, "every verdict is paragraph-level");
    score.raw = (total + score.alpha) / denominator;
    score.final_score = (score.raw + 1.0) / 2.0;
    return score;
}

std::vector<Rewrite> run_rai(const AgentContext& ctx, std::string_view reference,
                             const std::vector<SentenceVerdict>& verdicts, TaskKind task) {
    std::vector<const SentenceVerdict*> units;
    for (const auto& v : verdicts) {
        if (!v.polarity) throw Error(ErrorCode::InvalidArgument, "verdict has no polarity");
        if (v.sentence_level) units.push_back(&v);
    }
    const bool all_consistent =
        std::all_of(units.begin(), units.end(), [](const SentenceVerdict* v) { return *v->polarity == 1; });

    std::vector<Rewrite> rewrites;
    if (all_consistent) {
        for (const auto* v : units) rewrites.push_back({v->sentence, v->sentence, std::string(kAlreadyConsistent)});
        return rewrites;
    }

    if (task == TaskKind::ParagraphLevelConsistency) {
        const auto& summary = units.front()->sentence;
        std::string reasons;
        for (const auto* v : units) reasons += (reasons.empty() ? "" : "\n") + v->reason;
        const auto prompt = ctx.prompts.render(
            TemplateId::RaiParagraph, {{"article", std::string(reference)}, {"summary", summary}, {"reason", reasons}});
        auto entry = ask(ctx, prompt, [](const std::string& text) { return parse_rai_paragraph_output(text); });
        auto improved = normalize_whitespace(entry.improved_sentence);
        if (improved.empty() || says_already_consistent(entry.reason)) improved = summary;
        rewrites.push_back({summary, std::move(improved), entry.reason});
        return rewrites;
    }

    json listing = json::array();
    for (const auto* v : units) listing.push_back({{"sentence", v->sentence}, {"reason", v->reason}});
    const auto prompt = ctx.prompts.render(TemplateId::RaiSentence, {{"article", std::string(reference)}, {"sentences", listing.dump()}});
    const auto count = units.size();
    const auto output = ask(ctx, prompt, [count](const std::string& text) { return parse_rai_output(text, count); });

    for (std::size_t i = 0; i < count; ++i) {
        const auto& original = units[i]->sentence;
        const auto& entry = output.rewrites[i];
        if (*units[i]->polarity == 1) {
            if (normalize_whitespace(entry.improved_sentence) != original) {
                spdlog::debug("improver altered a consistent sentence; keeping the original");
            }
            rewrites.push_back({original, original, std::string(kAlreadyConsistent)});
            continue;
        }
        auto improved = normalize_whitespace(entry.improved_sentence);
        if (improved.empty() || says_already_consistent(entry.reason)) improved = original;
        rewrites.push_back({original, std::move(improved), entry.reason});
    }
    return rewrites;
}

}  // namespace dcr
