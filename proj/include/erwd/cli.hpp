#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erwd {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitDomain = 3,
    kExitBudget = 4,
    kExitAccuracy = 5,
};

/// Runs the tool with `args` (without the program name). Results go to the
/// --out file, to $ERWD_OUTPUT_DIR/<command>.<ext> when that variable is set,
/// and to `out` otherwise. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* library_version();

}  // namespace erwd
