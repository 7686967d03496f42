#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lambda_train::cli {

enum ExitCode : int {
  kOk = 0,
  kClaimFailed = 1,
  kInvalidInput = 2,
  kIntegratorError = 3,
};

/// Runs the command line `args` (without the program name). Standard streams
/// are injected so the commands can be driven in-process.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lambda_train::cli
