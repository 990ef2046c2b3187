#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ntsurf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumeric = 2,
  kExitDegenerate = 3,
  kExitClassificationFail = 4,
};

/// Runs the command line `args` (without the program name). Reports and
/// CSV go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ntsurf::cli
