#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qgraph::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kValidationError = 2,
  kNumericalWarning = 3,
};

/// Runs one qgraph command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qgraph::cli
