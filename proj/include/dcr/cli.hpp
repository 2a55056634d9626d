#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dcr {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `dcr` tool. `args` excludes the program name.
///
/// Subcommands: evaluate, improve, score-only, mock-demo. Returns 0 on
/// success, 1 when the run fails or aborts, 2 on usage errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dcr
