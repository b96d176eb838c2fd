#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgsim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kInputError = 3,
  kInternalError = 4,
};

// Runs one CLI invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgsim::cli
