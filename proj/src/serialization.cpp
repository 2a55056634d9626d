#include "dcr/serialization.hpp"

namespace dcr {

using json = nlohmann::json;

namespace {

template <typename T>
json optional_to_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

}  // namespace

void to_json(json& j, const EvaluationItem& v) {
    j = {{"item_id", v.item_id},
         {"reference", v.reference},
         {"candidate", v.candidate},
         {"human_label", optional_to_json(v.human_label)},
         {"binary_label", v.binary_label}};
}

void from_json(const json& j, EvaluationItem& v) {
    v.item_id = j.at("item_id").get<std::string>();
    v.reference = j.at("reference").get<std::string>();
    v.candidate = j.at("candidate").get<std::string>();
    v.human_label = optional_from_json<double>(j, "human_label");
    v.binary_label = j.value("binary_label", false);
}

void to_json(json& j, const SentenceVerdict& v) {
    j = {{"sentence", v.sentence},
         {"reason", v.reason},
         {"polarity", optional_to_json(v.polarity)},
         {"sentence_level", v.sentence_level}};
}

void from_json(const json& j, SentenceVerdict& v) {
    v.sentence = j.at("sentence").get<std::string>();
    v.reason = j.at("reason").get<std::string>();
    v.polarity = optional_from_json<int>(j, "polarity");
    v.sentence_level = j.at("sentence_level").get<bool>();
}

void to_json(json& j, const ConsistencyScore& v) {
    j = {{"z", v.z}, {"alpha", v.alpha}, {"beta", v.beta}, {"k", v.k}, {"raw", v.raw}, {"final", v.final_score}};
}

void from_json(const json& j, ConsistencyScore& v) {
    v.z = j.at("z").get<std::vector<int>>();
    v.alpha = j.at("alpha").get<double>();
    v.beta = j.at("beta").get<double>();
    v.k = j.at("k").get<int>();
    v.raw = j.at("raw").get<double>();
    v.final_score = j.at("final").get<double>();
}

void to_json(json& j, const Rewrite& v) {
    j = {{"original", v.original}, {"improved", v.improved}, {"reason", v.reason}};
}

void from_json(const json& j, Rewrite& v) {
    v.original = j.at("original").get<std::string>();
    v.improved = j.at("improved").get<std::string>();
    v.reason = j.at("reason").get<std::string>();
}

void to_json(json& j, const RoundRecord& v) {
    j = {{"round_index", v.round_index},
         {"sentences", v.sentences},
         {"verdicts", v.verdicts},
         {"score", v.score},
         {"rewritten_sentences", v.rewritten_sentences},
         {"converged", v.converged},
         {"dce_consistent", v.dce_consistent}};
}

void from_json(const json& j, RoundRecord& v) {
    v.round_index = j.at("round_index").get<int>();
    v.sentences = j.at("sentences").get<std::vector<std::string>>();
    v.verdicts = j.at("verdicts").get<std::vector<SentenceVerdict>>();
    v.score = j.at("score").get<ConsistencyScore>();
    v.rewritten_sentences = j.at("rewritten_sentences").get<std::vector<Rewrite>>();
    v.converged = j.at("converged").get<bool>();
    v.dce_consistent = j.at("dce_consistent").get<bool>();
}

void to_json(json& j, const ItemResult& v) {
    j = {{"item_id", v.item_id},
         {"human_label", optional_to_json(v.human_label)},
         {"binary_label", v.binary_label},
         {"initial_score", v.initial_score()},
         {"final_score", v.final_score()},
         {"rounds", v.rounds}};
}

void from_json(const json& j, ItemResult& v) {
    v.item_id = j.at("item_id").get<std::string>();
    v.human_label = optional_from_json<double>(j, "human_label");
    v.binary_label = j.value("binary_label", false);
    v.rounds = j.at("rounds").get<std::vector<RoundRecord>>();
    v.seconds = 0.0;
}

void to_json(json& j, const ItemFailure& v) { j = {{"item_id", v.item_id}, {"message", v.message}}; }

void from_json(const json& j, ItemFailure& v) {
    v.item_id = j.at("item_id").get<std::string>();
    v.message = j.at("message").get<std::string>();
}

void to_json(json& j, const Correlations& v) {
    j = {{"pearson", v.pearson}, {"spearman", v.spearman}, {"kendall_tau", v.kendall_tau}};
}

void from_json(const json& j, Correlations& v) {
    v.pearson = j.at("pearson").get<double>();
    v.spearman = j.at("spearman").get<double>();
    v.kendall_tau = j.at("kendall_tau").get<double>();
}

void to_json(json& j, const Classification& v) {
    j = {{"f1", optional_to_json(v.f1)},
         {"precision", optional_to_json(v.precision)},
         {"recall", optional_to_json(v.recall)},
         {"positive_class", v.positive_class}};
}

void from_json(const json& j, Classification& v) {
    v.f1 = optional_from_json<double>(j, "f1");
    v.precision = optional_from_json<double>(j, "precision");
    v.recall = optional_from_json<double>(j, "recall");
    v.positive_class = j.at("positive_class").get<int>();
}

void to_json(json& j, const Improvement& v) {
    j = {{"inconsistent", v.inconsistent}, {"corrected", v.corrected}, {"rate", v.rate}};
}

void from_json(const json& j, Improvement& v) {
    v.inconsistent = j.at("inconsistent").get<std::size_t>();
    v.corrected = j.at("corrected").get<std::size_t>();
    v.rate = j.at("rate").get<double>();
}

void to_json(json& j, const RunReport& v) {
    json per_item_seconds = json::array();
    for (const auto& item : v.per_item) per_item_seconds.push_back(item.seconds);
    j = {{"per_item", v.per_item},
         {"failures", v.failures},
         {"correlations", optional_to_json(v.correlations)},
         {"auroc", optional_to_json(v.auroc)},
         {"classification", optional_to_json(v.classification)},
         {"improvement", optional_to_json(v.improvement)},
         {"timing", {{"total_seconds", v.total_seconds}, {"per_item_seconds", per_item_seconds}}},
         {"config_echo", v.config_echo}};
}

void from_json(const json& j, RunReport& v) {
    v.per_item = j.at("per_item").get<std::vector<ItemResult>>();
    v.failures = j.at("failures").get<std::vector<ItemFailure>>();
    v.correlations = optional_from_json<Correlations>(j, "correlations");
    v.auroc = optional_from_json<double>(j, "auroc");
    v.classification = optional_from_json<Classification>(j, "classification");
    v.improvement = optional_from_json<Improvement>(j, "improvement");
    v.total_seconds = 0.0;
    if (const auto it = j.find("timing"); it != j.end()) {
        v.total_seconds = it->value("total_seconds", 0.0);
        if (const auto secs = it->find("per_item_seconds"); secs != it->end() && secs->size() == v.per_item.size()) {
            for (std::size_t i = 0; i < v.per_item.size(); ++i) v.per_item[i].seconds = (*secs)[i].get<double>();
        }
    }
    v.config_echo = j.value("config_echo", std::map<std::string, std::string>{});
}

}  // namespace dcr
