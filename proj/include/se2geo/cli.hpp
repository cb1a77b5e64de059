// Command-line front end: flow | connect | fan | lift | analyze.
//
// Exit codes: 0 success, 2 usage or parse error, 3 integration failure,
// 4 no convergence, 5 irregular inducer point.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace se2geo::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIntegration = 3,
  kNoConvergence = 4,
  kIrregularPoint = 5,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace se2geo::cli
