#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heatcontent::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kSuccess = 0,
  kInequalityViolated = 1,
  kUsageError = 2,
  kEngineFailure = 3,
};

/// Parses a t-grid spec: "geom:<lo>:<hi>:<n>" or "list:v1,v2,...".
/// The result is non-empty, strictly positive and strictly ascending;
/// anything else throws InvalidArgument.
std::vector<double> parse_t_grid(const std::string& spec);

/// Runs one command line (without the program name). Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heatcontent::cli
