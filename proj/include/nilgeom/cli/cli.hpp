#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nilgeom::cli {

/// Exit codes: 0 success, 1 a check or tolerance failed, 2 usage or input error.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadInput = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nilgeom::cli
