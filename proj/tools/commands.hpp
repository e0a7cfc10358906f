#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relmech::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitGuardTripped = 3,
};

/// Entry point of the relmech tool; args excludes the program name.
/// Tool output goes to out, diagnostics and logging to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relmech::cli
