#pragma once

#include <ostream>

namespace sphsieve::cli {

/// Exit codes.
enum Exit : int {
  ok = 0,
  usage = 2,            // bad flags, malformed input, precondition failures
  non_convergence = 3,  // an iterative solver hit its cap
  violation = 4,        // a proven inequality failed numerically
};

/// Runs one subcommand. Reports go to `out` unless --out names a file;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphsieve::cli
