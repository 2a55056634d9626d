#include "dcr/json_extract.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "dcr/error.hpp"

namespace dcr {

using json = nlohmann::json;

namespace {

constexpr std::size_t npos = std::string_view::npos;

struct Span {
    std::size_t end = npos;  // index of the closing bracket
    bool balanced = false;   // false: mismatched bracket at `end`, or never closed (end == npos)
};

Span match_brackets(std::string_view text, std::size_t start) {
    std::vector<char> stack;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        switch (c) {
            case '"': in_string = true; break;
            case '{': stack.push_back('}'); break;
            case '[': stack.push_back(']'); break;
            case '}':
            case ']':
                if (stack.back() != c) return {i, false};
                stack.pop_back();
                if (stack.empty()) return {i, true};
                break;
            default: break;
        }
    }
    return {};
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

// Rewrites bare True/False/None tokens outside of strings.
std::string normalize_python_literals(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            out.push_back(c);
            if (c == '\\' && i + 1 < text.size()) {
                out.push_back(text[++i]);
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
            out.push_back(c);
            continue;
        }
        const bool boundary_before = i == 0 || !is_word_char(text[i - 1]);
        bool replaced = false;
        if (boundary_before) {
            for (auto [from, to] : {std::pair{"True", "true"}, std::pair{"False", "false"}, std::pair{"None", "null"}}) {
                const std::string_view word(from);
                if (text.substr(i, word.size()) == word &&
                    (i + word.size() == text.size() || !is_word_char(text[i + word.size()]))) {
                    out.append(to);
                    i += word.size() - 1;
                    replaced = true;
                    break;
                }
            }
        }
        if (!replaced) out.push_back(c);
    }
    return out;
}

std::optional<json> try_parse(std::string_view candidate) {
    auto parsed = json::parse(candidate.begin(), candidate.end(), nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    const auto lenient = normalize_python_literals(candidate);
    parsed = json::parse(lenient, nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    return std::nullopt;
}

bool shape_ok(const json& value, JsonShape expect) {
    switch (expect) {
        case JsonShape::Any: return value.is_object() || value.is_array();
        case JsonShape::Object: return value.is_object();
        case JsonShape::Array: return value.is_array();
    }
    return false;
}

}  // namespace

json extract_json(std::string_view text, JsonShape expect) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto start = text.find_first_of("{[", pos);
        if (start == npos) break;
        const auto span = match_brackets(text, start);
        if (span.end == npos) break;
        if (span.balanced) {
            if (auto value = try_parse(text.substr(start, span.end - start + 1)); value && shape_ok(*value, expect)) {
                return std::move(*value);
            }
        }
        pos = span.end + 1;
    }
    throw Error(ErrorCode::ParseError, "no valid JSON value found in model output");
}

}  // namespace dcr
