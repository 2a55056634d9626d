#include "dcr/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dcr/error.hpp"
#include "dcr/segmenter.hpp"

namespace dcr {

using json = nlohmann::json;

namespace {

struct Columns {
    std::vector<std::string> id;
    std::vector<std::string> reference;
    std::vector<std::string> candidate;
    std::vector<std::string> label;
    bool binary = false;
};

Columns default_columns(DatasetFamily family) {
    switch (family) {
        case DatasetFamily::Qqp:
        case DatasetFamily::Paws:
            return {{"id"}, {"question1", "sentence1"}, {"question2", "sentence2"}, {"is_duplicate", "label"}, true};
        case DatasetFamily::Summeval:
            return {{"id"}, {"text", "article", "source", "reference"}, {"decoded", "summary", "candidate"},
                    {"expert_annotations", "consistency", "label"}, false};
        case DatasetFamily::QagsCnn:
        case DatasetFamily::QagsXsum:
            return {{"id"}, {"article", "reference"}, {"summary", "summary_sentences", "candidate"},
                    {"label", "score"}, false};
        case DatasetFamily::GenericPairs:
            return {{"id", "item_id"}, {"reference"}, {"candidate"}, {"label", "human_label"}, false};
    }
    return {};
}

[[noreturn]] void mismatch(const DatasetSpec& spec, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::SchemaMismatch, spec.path.string() + ":" + std::to_string(line) + ": " + what);
}

const json* find_field(const json& row, const std::vector<std::string>& names) {
    for (const auto& name : names) {
        const auto it = row.find(name);
        if (it != row.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

std::optional<double> number_of(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
    if (v.is_string()) {
        const auto s = normalize_whitespace(v.get<std::string>());
        if (s.empty()) return std::nullopt;
        try {
            std::size_t used = 0;
            const double d = std::stod(s, &used);
            if (used == s.size()) return d;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// SummEval: mean of expert consistency ratings. QAGS: mean over summary
// sentences of the majority yes/no vote.
std::optional<double> label_of(const json& v, const DatasetSpec& spec, std::size_t line) {
    if (v.is_array()) {
        std::vector<double> values;
        for (const auto& entry : v) {
            if (entry.is_object() && entry.contains("consistency")) {
                if (auto n = number_of(entry.at("consistency"))) values.push_back(*n);
            } else if (auto n = number_of(entry)) {
                values.push_back(*n);
            }
        }
        if (values.empty()) mismatch(spec, line, "label array has no numeric ratings");
        return mean(values);
    }
    if (auto n = number_of(v)) return n;
    mismatch(spec, line, "label " + v.dump() + " is not numeric");
}

std::optional<double> qags_sentence_votes(const json& sentences, const DatasetSpec& spec, std::size_t line) {
    std::vector<double> votes;
    for (const auto& s : sentences) {
        const auto it = s.find("responses");
        if (it == s.end()) return std::nullopt;
        int yes = 0, no = 0;
        for (const auto& r : *it) {
            const auto answer = r.is_object() ? r.value("response", std::string()) : r.get<std::string>();
            (answer == "yes" ? yes : no) += 1;
        }
        votes.push_back(yes > no ? 1.0 : 0.0);
    }
    if (votes.empty()) mismatch(spec, line, "summary_sentences is empty");
    return mean(votes);
}

std::string text_of(const json& v, const DatasetSpec& spec, std::size_t line, const char* role) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        // QAGS summary_sentences: [{"sentence": ...}, ...]
        std::string out;
        for (const auto& s : v) {
            const auto piece = s.is_object() ? s.value("sentence", std::string()) : (s.is_string() ? s.get<std::string>() : std::string());
            if (piece.empty()) continue;
            if (!out.empty()) out += ' ';
            out += piece;
        }
        return out;
    }
    if (v.is_number()) return v.dump();
    mismatch(spec, line, std::string(role) + " field is not text");
}

EvaluationItem map_row(const json& row, const DatasetSpec& spec, std::size_t line) {
    auto columns = default_columns(spec.family);
    for (const auto& [source, role] : spec.field_map) {
        if (role == "reference") columns.reference = {source};
        else if (role == "candidate") columns.candidate = {source};
        else if (role == "label") columns.label = {source};
        else if (role == "id") columns.id = {source};
    }

    EvaluationItem item;
    item.binary_label = columns.binary;
    const auto* reference = find_field(row, columns.reference);
    if (!reference) mismatch(spec, line, "missing reference field (" + columns.reference.front() + ")");
    const auto* candidate = find_field(row, columns.candidate);
    if (!candidate) mismatch(spec, line, "missing candidate field (" + columns.candidate.front() + ")");
    item.reference = text_of(*reference, spec, line, "reference");
    item.candidate = text_of(*candidate, spec, line, "candidate");

    if (const auto* label = find_field(row, columns.label)) {
        item.human_label = label_of(*label, spec, line);
    } else if (candidate->is_array()) {
        item.human_label = qags_sentence_votes(*candidate, spec, line);
    }

    if (const auto* id = find_field(row, columns.id)) {
        item.item_id = id->is_string() ? id->get<std::string>() : id->dump();
        if (spec.family == DatasetFamily::Summeval && row.contains("model_id") && row.at("model_id").is_string()) {
            item.item_id += "/" + row.at("model_id").get<std::string>();
        }
    } else {
        item.item_id = std::string(to_string(spec.family)) + "-" + std::to_string(line);
    }

    try {
        return validate_item(std::move(item));
    } catch (const Error& e) {
        mismatch(spec, line, e.what());
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return cells;
}

DatasetFormat detect_format(std::string_view content, const DatasetSpec& spec) {
    if (spec.format != DatasetFormat::Auto) return spec.format;
    const auto ext = spec.path.extension().string();
    if (ext == ".tsv") return DatasetFormat::Tsv;
    if (ext == ".jsonl" || ext == ".json") return DatasetFormat::JsonLines;
    const auto first = content.find_first_not_of(" \t\r\n");
    return first != std::string_view::npos && content[first] == '{' ? DatasetFormat::JsonLines : DatasetFormat::Tsv;
}

}  // namespace

std::string_view to_string(DatasetFamily family) {
    switch (family) {
        case DatasetFamily::Qqp: return "qqp";
        case DatasetFamily::Paws: return "paws";
        case DatasetFamily::Summeval: return "summeval";
        case DatasetFamily::QagsCnn: return "qags_cnn";
        case DatasetFamily::QagsXsum: return "qags_xsum";
        case DatasetFamily::GenericPairs: return "generic_pairs";
    }
    return "generic_pairs";
}

DatasetFamily parse_dataset_family(std::string_view text) {
    for (auto f : {DatasetFamily::Qqp, DatasetFamily::Paws, DatasetFamily::Summeval, DatasetFamily::QagsCnn,
                   DatasetFamily::QagsXsum, DatasetFamily::GenericPairs}) {
        if (to_string(f) == text) return f;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown dataset family '" + std::string(text) + "'");
}

std::map<std::string, std::string> parse_field_map(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto entry = normalize_whitespace(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (!entry.empty()) {
            const auto colon = entry.find(':');
            if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "field_map entry '" + entry + "' lacks ':'");
            const auto source = normalize_whitespace(entry.substr(0, colon));
            const auto role = normalize_whitespace(entry.substr(colon + 1));
            if (role != "reference" && role != "candidate" && role != "label" && role != "id") {
                throw Error(ErrorCode::InvalidArgument, "field_map role '" + role + "' is not reference, candidate, label or id");
            }
            out[source] = role;
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<EvaluationItem> parse_dataset(std::string_view content, const DatasetSpec& spec) {
    if (spec.limit && *spec.limit == 0) throw Error(ErrorCode::InvalidArgument, "limit must be at least 1");
    const auto format = detect_format(content, spec);

    std::vector<EvaluationItem> items;
    auto full = [&] { return spec.limit && items.size() >= *spec.limit; };

    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (!full() && std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (normalize_whitespace(line).empty()) continue;

        json row;
        if (format == DatasetFormat::JsonLines) {
            row = json::parse(line, nullptr, false);
            if (row.is_discarded() || !row.is_object()) mismatch(spec, line_no, "not a JSON object");
        } else if (header.empty()) {
            header = split_tabs(line);
            continue;
        } else {
            const auto cells = split_tabs(line);
            row = json::object();
            for (std::size_t c = 0; c < header.size() && c < cells.size(); ++c) row[header[c]] = cells[c];
        }
        items.push_back(map_row(row, spec, line_no));
    }
    if (items.empty()) throw Error(ErrorCode::EmptyDataset, spec.path.string() + " contains no items");
    return items;
}

std::vector<EvaluationItem> load_dataset(const DatasetSpec& spec) {
    std::ifstream in(spec.path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileMissing, "cannot open dataset " + spec.path.string());
    std::ostringstream content;
    content << in.rdbuf();
    return parse_dataset(content.str(), spec);
}

}  // namespace dcr
