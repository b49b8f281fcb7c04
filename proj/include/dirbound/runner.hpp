#ifndef DIRBOUND_RUNNER_HPP_
#define DIRBOUND_RUNNER_HPP_

#include <string>

#include "dirbound/config.hpp"
#include "dirbound/error.hpp"
#include "dirbound/report.hpp"

namespace dirbound {

enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 2,     // Unbounded kernel, rank Fail, band or pointwise failure
  kExitNumerical = 3,    // E_CONVERGENCE, E_SINGULAR, Inconclusive verdicts
  kExitConfig = 4,       // E_CONFIG, E_PARAM, E_SYMBOL, E_IO
};

int exit_code_for(ErrorCode code);

struct RunResult {
  Report report;
  int exit_code = kExitOk;
  std::string message;  // first error or failed check, empty on success
};

// Runs the configured experiment. Library errors are caught and turned into
// an error row plus the matching exit code.
RunResult run(const RunConfig& config);

// Short text form of a symbol for the `input` column.
std::string describe_symbol(const SymbolSpec& phi);

}  // namespace dirbound

#endif  // DIRBOUND_RUNNER_HPP_
