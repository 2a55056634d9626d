#pragma once

#include <optional>
#include <string_view>

namespace dcr {

/// Files compiled into the library (default prompts, demo fixtures), keyed
/// by their path relative to the source tree, e.g. "prompts/amc.txt".
std::optional<std::string_view> embedded_resource(std::string_view name);

}  // namespace dcr
