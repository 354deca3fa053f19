#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlh::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kSolver = 3,
  kStructure = 4,
};

/// args[0] is the program name. Human-readable progress goes to `out`,
/// diagnostics to `err`; reports go to the -o path (or `out` without one).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace qlh::cli
