#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmeasure::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInvalidInput = 2,
  kExitInfeasible = 3,
  kExitUndetermined = 4,
};

/// Runs one command line (args[0] is the program name). Reports go to `out`
/// as JSON, diagnostics and log lines to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmeasure::cli
