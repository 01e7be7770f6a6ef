#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freebrown::cli {

/// Exit codes of the command line frontend.
enum ExitCode {
  kOk = 0,
  kValidationError = 2,
  kSolverFailure = 3,
  kIoError = 4,
};

/// Runs one invocation, e.g.
///   run({"brown", "--poly", "x1", "--model", "x1=semicircle:2",
///        "--grid", "-3:3:-1:1:121x41", "--eps", "1e-3", "--out", "run1"})
/// Diagnostics go to `err` as structured lines; outputs are written
/// atomically next to the --out prefix together with a JSON manifest.
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace freebrown::cli
