#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dcr/model.hpp"

namespace dcr {

/// Predicted scores against human judgments. Both sides must have the same
/// non-zero length and hold only finite values.
struct PairedSeries {
    std::vector<double> predicted;
    std::vector<double> target;

    /// Throws InvalidArgument.
    void validate() const;
};

/// Product-moment correlation. Throws DegenerateSeries when either side has
/// zero variance or fewer than two points.
double pearson(const PairedSeries& s);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks.
double spearman(const PairedSeries& s);

/// Kendall tau-b, O(n log n). Throws DegenerateSeries when every value on
/// either side is tied.
double kendall_tau(const PairedSeries& s);

/// Mann-Whitney AUROC: P(pos > neg) + 0.5 P(pos == neg). Labels must be 0 or
/// 1; throws SingleClass when only one class is present.
double auroc(std::span<const double> scores, std::span<const int> labels);

struct Prf {
    std::optional<double> f1;
    std::optional<double> precision;
    std::optional<double> recall;
};

/// Precision, recall and F1 for `positive_class`. A metric whose
/// denominator is zero is returned empty.
Prf prf(std::span<const int> predicted, std::span<const int> truth, int positive_class = 1);

struct ImprovementStats {
    std::size_t inconsistent = 0;
    std::size_t corrected = 0;
    double rate = 0.0;
};

/// Items whose first-round score is below 1, and how many of those end at
/// exactly 1. Throws NoInconsistent when none start below 1.
ImprovementStats improvement_stats(const std::vector<std::vector<RoundRecord>>& per_item);

}  // namespace dcr
