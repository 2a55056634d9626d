#include "dcr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "dcr/error.hpp"
#include "dcr/serialization.hpp"
#include "dcr/stats.hpp"

namespace dcr {

namespace fs = std::filesystem;

namespace {

constexpr int kBins = 10;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string metric_or_na(const std::optional<double>& v) { return v ? format_metric(*v) : "NA"; }

std::string summary_csv(const RunReport& r) {
    std::string out = "metric,value\n";
    if (r.per_item.empty()) return out;
    auto row = [&](const char* name, const std::string& value) { out += std::string(name) + "," + value + "\n"; };
    row("items", std::to_string(r.per_item.size()));
    row("failures", std::to_string(r.failures.size()));
    const auto& c = r.correlations;
    row("pearson", metric_or_na(c ? std::optional(c->pearson) : std::nullopt));
    row("spearman", metric_or_na(c ? std::optional(c->spearman) : std::nullopt));
    row("kendall_tau", metric_or_na(c ? std::optional(c->kendall_tau) : std::nullopt));
    row("auroc", metric_or_na(r.auroc));
    const auto& k = r.classification;
    row("f1", metric_or_na(k ? k->f1 : std::nullopt));
    row("precision", metric_or_na(k ? k->precision : std::nullopt));
    row("recall", metric_or_na(k ? k->recall : std::nullopt));
    const auto& i = r.improvement;
    row("inconsistent", i ? std::to_string(i->inconsistent) : "NA");
    row("corrected", i ? std::to_string(i->corrected) : "NA");
    row("improvement_rate", metric_or_na(i ? std::optional(i->rate) : std::nullopt));
    return out;
}

std::string per_item_csv(const RunReport& r) {
    std::string out = "item_id,rounds,initial_score,final_score,converged,human_label\n";
    for (const auto& item : r.per_item) {
        const bool converged = !item.rounds.empty() && item.rounds.back().converged;
        out += item.item_id + "," + std::to_string(item.rounds.size()) + "," + format_metric(item.initial_score()) + "," +
               format_metric(item.final_score()) + "," + (converged ? "true" : "false") + "," + metric_or_na(item.human_label) +
               "\n";
    }
    return out;
}

int bin_of(double score) {
    if (score >= 1.0) return kBins;
    return std::clamp(static_cast<int>(std::floor(score * kBins + 1e-9)), 0, kBins - 1);
}

std::string bin_label(int bin) {
    if (bin == kBins) return "1.0";
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f-%.1f", bin / 10.0, (bin + 1) / 10.0);
    return buf;
}

// Items that stopped early keep their last score in later rounds.
std::string round_hist_csv(const RunReport& r) {
    std::size_t rounds = 0;
    for (const auto& item : r.per_item) rounds = std::max(rounds, item.rounds.size());
    std::vector<std::vector<int>> counts(kBins + 1, std::vector<int>(rounds, 0));
    for (const auto& item : r.per_item) {
        for (std::size_t k = 0; k < rounds && !item.rounds.empty(); ++k) {
            const auto& rec = item.rounds[std::min(k, item.rounds.size() - 1)];
            ++counts[bin_of(rec.score.final_score)][k];
        }
    }
    std::string out = "bin";
    for (std::size_t k = 0; k < rounds; ++k) out += ",round_" + std::to_string(k + 1);
    out += "\n";
    if (r.per_item.empty()) return out;
    for (int b = 0; b <= kBins; ++b) {
        out += bin_label(b);
        for (int c : counts[b]) out += "," + std::to_string(c);
        out += "\n";
    }
    return out;
}

std::string threads_seconds_csv(const RunReport& r) {
    std::string out = "threads,items,total_seconds\n";
    if (r.per_item.empty()) return out;
    const auto it = r.config_echo.find("threads");
    out += (it != r.config_echo.end() ? it->second : std::string("1")) + "," + std::to_string(r.per_item.size()) + "," +
           format_metric(r.total_seconds) + "\n";
    return out;
}

}  // namespace

std::string format_metric(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

void compute_aggregates(RunReport& report, int positive_class, bool improve) {
    report.correlations.reset();
    report.auroc.reset();
    report.classification.reset();
    report.improvement.reset();

    PairedSeries series;
    bool binary = true;
    for (const auto& item : report.per_item) {
        if (!item.human_label) continue;
        series.predicted.push_back(item.initial_score());
        series.target.push_back(*item.human_label);
        binary = binary && (*item.human_label == 0.0 || *item.human_label == 1.0);
    }

    if (series.predicted.size() >= 2) {
        try {
            report.correlations = Correlations{pearson(series), spearman(series), kendall_tau(series)};
        } catch (const Error& e) {
            spdlog::debug("correlations undefined: {}", e.what());
        }
    }

    if (binary && !series.predicted.empty()) {
        std::vector<int> truth, predicted;
        for (std::size_t i = 0; i < series.target.size(); ++i) {
            truth.push_back(series.target[i] == 1.0 ? 1 : 0);
            predicted.push_back(series.predicted[i] == 1.0 ? 1 : 0);
        }
        try {
            report.auroc = auroc(series.predicted, truth);
        } catch (const Error& e) {
            spdlog::debug("auroc undefined: {}", e.what());
        }
        const auto m = prf(predicted, truth, positive_class);
        report.classification = Classification{m.f1, m.precision, m.recall, positive_class};
    }

    if (improve && !report.per_item.empty()) {
        std::vector<std::vector<RoundRecord>> rounds;
        for (const auto& item : report.per_item) rounds.push_back(item.rounds);
        try {
            const auto s = improvement_stats(rounds);
            report.improvement = Improvement{s.inconsistent, s.corrected, s.rate};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoInconsistent) throw;
        }
    }
}

void write_report(const RunReport& report, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir / "plotdata", ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

    write_file(out_dir / "report.json", nlohmann::json(report).dump(2) + "\n");
    write_file(out_dir / "summary.csv", summary_csv(report));
    write_file(out_dir / "per_item.csv", per_item_csv(report));
    write_file(out_dir / "plotdata" / "round_hist.csv", round_hist_csv(report));
    write_file(out_dir / "plotdata" / "threads_seconds.csv", threads_seconds_csv(report));
}

RunReport read_report(const fs::path& path) {
    const auto file = fs::is_directory(path) ? path / "report.json" : path;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileMissing, "cannot open report " + file.string());
    try {
        return nlohmann::json::parse(in).get<RunReport>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch, file.string() + ": " + e.what());
    }
}

}  // namespace dcr
