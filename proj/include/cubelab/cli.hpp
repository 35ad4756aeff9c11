#pragma once

// Command-line entry point. run() never exits the process, so tests can
// drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace cubelab::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kBudget = 3,
  kInput = 4,
  kPrecondition = 5,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubelab::cli
