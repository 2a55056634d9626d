#include "dcr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "dcr/error.hpp"

namespace dcr {

namespace {

void require_length(const PairedSeries& s) {
    s.validate();
    if (s.predicted.size() < 2) throw Error(ErrorCode::DegenerateSeries, "need at least two points");
}

double pearson_of(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateSeries, "series has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::int64_t pairs(std::int64_t n) { return n * (n - 1) / 2; }

// Sum of t(t-1)/2 over runs of equal values in an already sorted sequence.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq equal) {
    std::int64_t total = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && equal(i - 1, i)) {
            ++run;
        } else {
            total += pairs(static_cast<std::int64_t>(run));
            run = 1;
        }
    }
    return total;
}

// Sorts `v` ascending and returns the number of strictly inverted pairs.
std::int64_t sort_count_inversions(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t count = sort_count_inversions(v, scratch, lo, mid) + sort_count_inversions(v, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            count += static_cast<std::int64_t>(mid - i);
            scratch[k++] = v[j++];
        } else {
            scratch[k++] = v[i++];
        }
    }
    while (i < mid) scratch[k++] = v[i++];
    while (j < hi) scratch[k++] = v[j++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return count;
}

}  // namespace

void PairedSeries::validate() const {
    if (predicted.size() != target.size()) throw Error(ErrorCode::InvalidArgument, "series lengths differ");
    if (predicted.empty()) throw Error(ErrorCode::InvalidArgument, "series are empty");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(predicted.begin(), predicted.end(), finite) || !std::all_of(target.begin(), target.end(), finite)) {
        throw Error(ErrorCode::InvalidArgument, "series contain non-finite values");
    }
}

double pearson(const PairedSeries& s) {
    require_length(s);
    return pearson_of(s.predicted, s.target);
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mean_rank;
        i = j;
    }
    return ranks;
}

double spearman(const PairedSeries& s) {
    require_length(s);
    const auto rx = average_ranks(s.predicted);
    const auto ry = average_ranks(s.target);
    return pearson_of(rx, ry);
}

double kendall_tau(const PairedSeries& s) {
    require_length(s);
    const std::size_t n = s.predicted.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s.predicted[a] != s.predicted[b]) return s.predicted[a] < s.predicted[b];
        return s.target[a] < s.target[b];
    });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = s.predicted[order[i]];
        ys[i] = s.target[order[i]];
    }

    const std::int64_t total = pairs(static_cast<std::int64_t>(n));
    const std::int64_t x_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b]; });
    const std::int64_t joint_ties =
        tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b] && ys[a] == ys[b]; });

    std::vector<double> scratch(n);
    const std::int64_t discordant = sort_count_inversions(ys, scratch, 0, n);
    const std::int64_t y_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

    const std::int64_t x_untied = total - x_ties;
    const std::int64_t y_untied = total - y_ties;
    if (x_untied == 0 || y_untied == 0) throw Error(ErrorCode::DegenerateSeries, "every value is tied");

    // concordant - discordant
    const std::int64_t numerator = total - x_ties - y_ties + joint_ties - 2 * discordant;
    return static_cast<double>(numerator) / std::sqrt(static_cast<double>(x_untied) * static_cast<double>(y_untied));
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw Error(ErrorCode::InvalidArgument, "scores and labels differ in length");
    std::int64_t positives = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
        if (!std::isfinite(scores[i])) throw Error(ErrorCode::InvalidArgument, "scores contain non-finite values");
        positives += labels[i];
    }
    const std::int64_t negatives = static_cast<std::int64_t>(labels.size()) - positives;
    if (positives == 0 || negatives == 0) throw Error(ErrorCode::SingleClass, "both classes are needed");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Twice the Mann-Whitney U, kept integral so ties stay exact.
    std::int64_t twice_u = 0;
    std::int64_t negatives_below = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::int64_t pos = 0, neg = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == 1 ? pos : neg) += 1;
            ++j;
        }
        twice_u += 2 * pos * negatives_below + pos * neg;
        negatives_below += neg;
        i = j;
    }
    return static_cast<double>(twice_u) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

Prf prf(std::span<const int> predicted, std::span<const int> truth, int positive_class) {
    if (predicted.size() != truth.size()) throw Error(ErrorCode::InvalidArgument, "label lists differ in length");
    if (positive_class != 0 && positive_class != 1) throw Error(ErrorCode::InvalidArgument, "positive class must be 0 or 1");
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] == positive_class;
        const bool t = truth[i] == positive_class;
        tp += p && t;
        fp += p && !t;
        fn += !p && t;
    }
    Prf out;
    if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (2 * tp + fp + fn > 0) out.f1 = static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
    return out;
}

ImprovementStats improvement_stats(const std::vector<std::vector<RoundRecord>>& per_item) {
    ImprovementStats out;
    for (const auto& rounds : per_item) {
        if (rounds.empty()) throw Error(ErrorCode::InvalidArgument, "item has no rounds");
        if (rounds.front().score.final_score < 1.0) {
            ++out.inconsistent;
            if (rounds.back().score.final_score == 1.0) ++out.corrected;
        }
    }
    if (out.inconsistent == 0) throw Error(ErrorCode::NoInconsistent, "no item started inconsistent");
    out.rate = static_cast<double>(out.corrected) / static_cast<double>(out.inconsistent);
    return out;
}

}  // namespace dcr
