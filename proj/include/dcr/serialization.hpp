#pragma once

#include <nlohmann/json.hpp>

#include "dcr/model.hpp"

namespace dcr {

void to_json(nlohmann::json& j, const EvaluationItem& v);
void from_json(const nlohmann::json& j, EvaluationItem& v);
void to_json(nlohmann::json& j, const SentenceVerdict& v);
void from_json(const nlohmann::json& j, SentenceVerdict& v);
void to_json(nlohmann::json& j, const ConsistencyScore& v);
void from_json(const nlohmann::json& j, ConsistencyScore& v);
void to_json(nlohmann::json& j, const Rewrite& v);
void from_json(const nlohmann::json& j, Rewrite& v);
void to_json(nlohmann::json& j, const RoundRecord& v);
void from_json(const nlohmann::json& j, RoundRecord& v);
void to_json(nlohmann::json& j, const ItemFailure& v);
void from_json(const nlohmann::json& j, ItemFailure& v);
void to_json(nlohmann::json& j, const Correlations& v);
void from_json(const nlohmann::json& j, Correlations& v);
void to_json(nlohmann::json& j, const Classification& v);
void from_json(const nlohmann::json& j, Classification& v);
void to_json(nlohmann::json& j, const Improvement& v);
void from_json(const nlohmann::json& j, Improvement& v);

/// Per-item results omit wall-clock seconds; those live under the report's
/// "timing" object so everything else is reproducible byte for byte.
void to_json(nlohmann::json& j, const ItemResult& v);
void from_json(const nlohmann::json& j, ItemResult& v);
void to_json(nlohmann::json& j, const RunReport& v);
void from_json(const nlohmann::json& j, RunReport& v);

}  // namespace dcr
