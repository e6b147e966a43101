#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace docgen::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kInfeasible = 2,
  kIoError = 3,
};

// Runs the docgen command line. args[0] is the program name. Machine-readable
// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace docgen::cli
