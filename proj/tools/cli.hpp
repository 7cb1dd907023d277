#pragma once

#include <iosfwd>

namespace cmpp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kInfeasible = 2,
  kInternal = 3,
};

// Entry point shared by the executable and the tests. Errors go to `err`
// with an "error:" prefix.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmpp::cli
