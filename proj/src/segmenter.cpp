#include "dcr/segmenter.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "dcr/error.hpp"

namespace dcr {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Bytes >= 0x80 are parts of UTF-8 sequences and count as content.
bool is_content(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0;
}

bool has_content(std::string_view s) { return std::any_of(s.begin(), s.end(), is_content); }

std::size_t non_space_count(std::string_view s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return !is_space(c); }));
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Length of a closing quote/bracket at `pos`, or 0.
std::size_t closer_length(std::string_view text, std::size_t pos) {
    const char c = text[pos];
    if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') return 1;
    // U+2019 and U+201D
    if (text.substr(pos, 3) == "\xE2\x80\x99" || text.substr(pos, 3) == "\xE2\x80\x9D") return 3;
    return 0;
}

class Splitter {
public:
    Splitter(std::string_view text, const SegmentationConfig& cfg) : text_(text), cfg_(cfg) {
        for (const auto& a : cfg.abbreviation_list) abbreviations_.insert(lowercase(a));
    }

    std::vector<std::string> pieces() {
        std::vector<std::string> out;
        std::size_t start = 0;
        std::size_t i = 0;
        const std::size_t n = text_.size();
        while (i < n) {
            const char c = text_[i];
            if (cfg_.treat_newline_as_boundary && c == '\n') {
                emit(out, start, i);
                start = ++i;
                continue;
            }
            if (!is_terminator(c)) {
                ++i;
                continue;
            }
            std::size_t end = i + 1;
            while (end < n && is_terminator(text_[end])) ++end;
            const bool single_period = (c == '.' && end == i + 1);
            while (end < n) {
                const auto len = closer_length(text_, end);
                if (len == 0) break;
                end += len;
            }
            if ((end == n || is_space(text_[end])) && !(single_period && guarded(start, i))) {
                emit(out, start, end);
                start = end;
            }
            i = end;
        }
        emit(out, start, n);
        return out;
    }

private:
    // True when the period at `dot` belongs to an abbreviation or an initial.
    bool guarded(std::size_t start, std::size_t dot) const {
        std::size_t tok = dot;
        while (tok > start && !is_space(text_[tok - 1])) --tok;
        const auto token = text_.substr(tok, dot - tok + 1);
        if (abbreviations_.count(lowercase(token)) != 0) return true;
        return token.size() == 2 && std::isupper(static_cast<unsigned char>(token[0])) != 0;
    }

    void emit(std::vector<std::string>& out, std::size_t from, std::size_t to) const {
        if (to <= from) return;
        auto piece = normalize_whitespace(text_.substr(from, to - from));
        if (!piece.empty()) out.push_back(std::move(piece));
    }

    std::string_view text_;
    const SegmentationConfig& cfg_;
    std::set<std::string> abbreviations_;
};

}  // namespace

SegmentationConfig SegmentationConfig::defaults() {
    SegmentationConfig cfg;
    cfg.abbreviation_list = default_abbreviations();
    return cfg;
}

std::set<std::string> default_abbreviations() {
    return {"Mr.",   "Mrs.",  "Ms.",   "Dr.",   "Prof.", "Sr.",  "Jr.",  "St.",   "Mt.",   "vs.",
            "etc.",  "e.g.",  "i.e.",  "U.S.",  "U.K.",  "U.N.", "No.",  "Inc.",  "Ltd.",  "Co.",
            "Corp.", "Gen.",  "Col.",  "Lt.",   "Sgt.",  "Capt.", "Rev.", "Gov.",  "Sen.",  "Rep.",
            "Jan.",  "Feb.",  "Mar.",  "Apr.",  "Aug.",  "Sept.", "Sep.", "Oct.",  "Nov.",  "Dec.",
            "a.m.",  "p.m.",  "approx.", "est.", "Fig.", "al."};
}

std::set<std::string> load_abbreviations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileMissing, "cannot open abbreviation list " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto entry = normalize_whitespace(line);
        if (entry.empty()) continue;
        if (entry.back() != '.') {
            throw Error(ErrorCode::InvalidArgument, "abbreviation '" + entry + "' does not end with a period");
        }
        out.insert(std::move(entry));
    }
    return out;
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> split_sentences(std::string_view text, const SegmentationConfig& cfg) {
    if (cfg.min_sentence_chars < 1) {
        throw Error(ErrorCode::InvalidArgument, "min_sentence_chars must be at least 1");
    }
    for (const auto& a : cfg.abbreviation_list) {
        if (a.empty() || a.back() != '.') {
            throw Error(ErrorCode::InvalidArgument, "abbreviation '" + a + "' does not end with a period");
        }
    }
    if (!has_content(text)) throw Error(ErrorCode::NoSentences, "text has no letters or digits");

    const auto min_chars = static_cast<std::size_t>(cfg.min_sentence_chars);
    auto too_small = [&](std::string_view s) { return non_space_count(s) < min_chars || !has_content(s); };

    std::vector<std::string> merged;
    std::string carry;
    for (auto& piece : Splitter(text, cfg).pieces()) {
        if (!carry.empty()) {
            piece = carry + " " + piece;
            carry.clear();
        }
        if (too_small(piece)) {
            carry = std::move(piece);
        } else {
            merged.push_back(std::move(piece));
        }
    }
    if (!carry.empty()) {
        if (merged.empty()) {
            merged.push_back(std::move(carry));
        } else {
            merged.back() += " " + carry;
        }
    }
    return merged;
}

}  // namespace dcr
