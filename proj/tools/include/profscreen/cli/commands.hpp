#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace profscreen::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (program name first) and dispatches to screen, simulate
/// or bench. Never throws; errors are written to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace profscreen::cli
