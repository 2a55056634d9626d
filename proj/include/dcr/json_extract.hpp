#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace dcr {

enum class JsonShape { Any, Object, Array };

/// Pulls the first top-level JSON value of the requested shape out of a
/// model reply, tolerating markdown code fences and surrounding prose.
/// Python-style True/False/None literals are accepted.
///
/// Only outermost bracket spans are tried: if a span is truncated or
/// malformed, nothing nested inside it is considered, so a damaged payload
/// raises ParseError instead of yielding one of its fragments.
nlohmann::json extract_json(std::string_view text, JsonShape expect = JsonShape::Any);

}  // namespace dcr
