#pragma once

#include <filesystem>
#include <string>

#include "dcr/model.hpp"

namespace dcr {

/// Fills the aggregate metrics of `report` from its per-item results.
///
/// Correlations use every item with a human label. AUROC and P/R/F1 are only
/// computed when all labels are 0 or 1; the predicted class is
/// "initial score == 1". Improvement stats are computed when `improve` is
/// set. A metric that is undefined for the data is left empty.
void compute_aggregates(RunReport& report, int positive_class, bool improve);

/// Fixed-point rendering used by every CSV file ("%.6f").
std::string format_metric(double value);

/// Writes report.json, summary.csv, per_item.csv, plotdata/round_hist.csv
/// and plotdata/threads_seconds.csv under `out_dir`. Throws IoError.
void write_report(const RunReport& report, const std::filesystem::path& out_dir);

/// Reads `<dir>/report.json` (or the file itself). Throws FileMissing or
/// SchemaMismatch.
RunReport read_report(const std::filesystem::path& path);

}  // namespace dcr
