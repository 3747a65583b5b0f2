#pragma once

#include <ostream>

namespace rrc {

/// Exit codes of the rrcb binary.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFormat = 2, kExitCheckFailed = 3 };

/// Entry point of the rrcb tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rrc
