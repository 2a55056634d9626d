#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcr/model.hpp"

namespace dcr {

enum class DatasetFamily { Qqp, Paws, Summeval, QagsCnn, QagsXsum, GenericPairs };

std::string_view to_string(DatasetFamily family);
DatasetFamily parse_dataset_family(std::string_view text);

enum class DatasetFormat { Auto, JsonLines, Tsv };

struct DatasetSpec {
    DatasetFamily family = DatasetFamily::GenericPairs;
    std::filesystem::path path;
    /// Keep only the first `limit` rows (file order).
    std::optional<std::size_t> limit;
    /// Source column -> "reference" | "candidate" | "label" | "id".
    /// Overrides the family's default column names.
    std::map<std::string, std::string> field_map;
    DatasetFormat format = DatasetFormat::Auto;
};

/// Parses "col:role,col:role" into a field map. Throws InvalidArgument.
std::map<std::string, std::string> parse_field_map(std::string_view text);

/// Loads a JSON Lines or tab-separated (with header) file.
/// Throws FileMissing, SchemaMismatch (with the line number) or EmptyDataset.
std::vector<EvaluationItem> load_dataset(const DatasetSpec& spec);

/// Same as load_dataset over in-memory content; `spec.path` is only used in
/// messages and for format detection.
std::vector<EvaluationItem> parse_dataset(std::string_view content, const DatasetSpec& spec);

}  // namespace dcr
