#pragma once

// Brute-force reference implementations. They share no code with the
// library and favour obviousness over speed.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// Score with excluded entries simply deleted.
inline double final_by_deletion(const std::vector<int>& z, const std::vector<bool>& excluded) {
    int sum = 0, count = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (excluded[i]) continue;
        sum += z[i];
        ++count;
    }
    const double raw = static_cast<double>(sum) / count;
    return (raw + 1.0) / 2.0;
}

/// Textbook one-pass sums formula.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

/// Rank = 1 + (#smaller) + (#equal - 1) / 2, by counting.
inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        int less = 0, equal = 0;
        for (double w : v) {
            if (w < v[i]) ++less;
            if (w == v[i]) ++equal;
        }
        out[i] = 1.0 + less + (equal - 1) / 2.0;
    }
    return out;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) { return pearson(ranks(x), ranks(y)); }

/// Tau-b by enumerating every pair.
inline double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    std::int64_t concordant = 0, discordant = 0, tie_x_only = 0, tie_y_only = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const bool tx = x[i] == x[j];
            const bool ty = y[i] == y[j];
            if (tx && ty) continue;
            if (tx) ++tie_x_only;
            else if (ty) ++tie_y_only;
            else if ((x[i] < x[j]) == (y[i] < y[j])) ++concordant;
            else ++discordant;
        }
    }
    const double left = static_cast<double>(concordant + discordant + tie_y_only);
    const double right = static_cast<double>(concordant + discordant + tie_x_only);
    return static_cast<double>(concordant - discordant) / std::sqrt(left * right);
}

/// Every positive/negative pair; a tie counts half.
inline double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::int64_t wins = 0, ties = 0, pos = 0, neg = 0;
    for (int l : labels) (l == 1 ? pos : neg) += 1;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j]) ++wins;
            else if (scores[i] == scores[j]) ++ties;
        }
    }
    return static_cast<double>(2 * wins + ties) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

/// Splits after each '.', '!' or '?' that is followed by a space or the
/// end, unless the word it ends is listed in `abbreviations`.
inline std::vector<std::string> split_simple(const std::string& text, const std::set<std::string>& abbreviations) {
    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        current += text[i];
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 < text.size() && text[i + 1] != ' ') continue;
        const auto space = current.rfind(' ');
        const auto word = current.substr(space == std::string::npos ? 0 : space + 1);
        if (abbreviations.count(word)) continue;
        out.push_back(current);
        current.clear();
        while (i + 1 < text.size() && text[i + 1] == ' ') ++i;
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

/// Sorted non-whitespace characters.
inline std::string visible_chars(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oracle
