#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gauge_graph {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitModel = 3,
  kExitVerification = 4,
};

/// Runs the command line (arguments after the program name). Reports go to
/// `out`; diagnostics go to `err` as one JSON object per failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gauge_graph
