#pragma once

#include <iosfwd>

namespace rankreg::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kRuntimeError = 1, kUsageError = 2 };

/// Runs `rankreg <command> [flags]`. Normal output goes to `out`, diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankreg::cli
