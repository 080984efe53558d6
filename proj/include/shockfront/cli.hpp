#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shockfront::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kConfig = 3,
  kDomain = 4,
  kNumeric = 5,
};

/// Parses argv, dispatches the subcommand and returns the exit code.
/// Nothing is written (stdout or files) unless the command succeeds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with args excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shockfront::cli
