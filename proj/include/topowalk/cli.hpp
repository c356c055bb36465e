#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace topowalk::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadArguments = 2,
  kBudgetExceeded = 3,
};

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// files under --out; progress and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count: explicit value if positive, else TOPOWALK_THREADS, else the
/// number of processors.
int resolve_threads(int requested);

}  // namespace topowalk::cli
