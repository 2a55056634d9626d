#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dcr {

struct SegmentationConfig {
    /// Tokens that end in a period but do not end a sentence. Matched
    /// case-insensitively; every entry must end with '.'.
    std::set<std::string> abbreviation_list;
    /// Pieces with fewer non-space characters than this are merged into a
    /// neighbour.
    int min_sentence_chars = 2;
    bool treat_newline_as_boundary = false;

    /// Config with the built-in English abbreviation list.
    static SegmentationConfig defaults();
};

std::set<std::string> default_abbreviations();

/// Reads one abbreviation per line (UTF-8). Blank lines are ignored.
std::set<std::string> load_abbreviations(const std::filesystem::path& path);

/// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Splits a paragraph into sentences on '.', '!' and '?' followed by
/// whitespace or end of text. Returned sentences are whitespace-normalized.
/// Throws NoSentences when the text has no letters or digits.
std::vector<std::string> split_sentences(std::string_view text, const SegmentationConfig& cfg);

}  // namespace dcr
