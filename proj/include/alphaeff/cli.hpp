#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alphaeff::cli {

/// Stable exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kIoError = 1,
  kValidationError = 2,
};

/// Runs the command line `args` (without the program name). Reads `-`
/// inputs from `in`, writes results to `out` and diagnostics to `err`.
int run(const std::vector<std::string> &args, std::istream &in,
        std::ostream &out, std::ostream &err);

} // namespace alphaeff::cli
