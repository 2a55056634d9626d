#include "dcr/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dcr/error.hpp"

namespace dcr {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyText: return "EmptyText";
        case ErrorCode::BadLabel: return "BadLabel";
        case ErrorCode::NoSentences: return "NoSentences";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidSettings: return "InvalidSettings";
        case ErrorCode::TransportError: return "TransportError";
        case ErrorCode::ProviderRefusal: return "ProviderRefusal";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::MockMiss: return "MockMiss";
        case ErrorCode::MissingPlaceholder: return "MissingPlaceholder";
        case ErrorCode::UnknownTemplate: return "UnknownTemplate";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::BadMark: return "BadMark";
        case ErrorCode::AllExcluded: return "AllExcluded";
        case ErrorCode::ItemFailed: return "ItemFailed";
        case ErrorCode::Aborted: return "Aborted";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::NoInconsistent: return "NoInconsistent";
        case ErrorCode::FileMissing: return "FileMissing";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

MissingPlaceholderError::MissingPlaceholderError(std::vector<std::string> names)
    : Error(ErrorCode::MissingPlaceholder, "no value for " + join_names(names)), names_(std::move(names)) {}

std::string_view to_string(TaskKind task) {
    switch (task) {
        case TaskKind::SemanticPair: return "SemanticPair";
        case TaskKind::SummarizationConsistency: return "SummarizationConsistency";
        case TaskKind::ParagraphLevelConsistency: return "ParagraphLevelConsistency";
    }
    return "SummarizationConsistency";
}

TaskKind parse_task_kind(std::string_view text) {
    if (text == "SemanticPair" || text == "semantic") return TaskKind::SemanticPair;
    if (text == "SummarizationConsistency" || text == "summarization") return TaskKind::SummarizationConsistency;
    if (text == "ParagraphLevelConsistency" || text == "paragraph") return TaskKind::ParagraphLevelConsistency;
    throw Error(ErrorCode::InvalidArgument, "unknown task kind '" + std::string(text) + "'");
}

double ItemResult::initial_score() const {
    return rounds.empty() ? 0.0 : rounds.front().score.final_score;
}

double ItemResult::final_score() const {
    return rounds.empty() ? 0.0 : rounds.back().score.final_score;
}

EvaluationItem validate_item(EvaluationItem item) {
    if (is_blank(item.reference)) {
        throw Error(ErrorCode::EmptyText, "item '" + item.item_id + "' has a blank reference");
    }
    if (is_blank(item.candidate)) {
        throw Error(ErrorCode::EmptyText, "item '" + item.item_id + "' has a blank candidate");
    }
    if (item.human_label) {
        const double label = *item.human_label;
        if (!std::isfinite(label)) {
            throw Error(ErrorCode::BadLabel, "item '" + item.item_id + "' has a non-finite label");
        }
        if (item.binary_label && label != 0.0 && label != 1.0) {
            throw Error(ErrorCode::BadLabel, "item '" + item.item_id + "' has binary label " + std::to_string(label));
        }
    }
    return item;
}

}  // namespace dcr
