#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roydennet {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

/// Runs `roydennet <args...>` (args excludes the program name). Human
/// messages go to `err`; JSON written to "-" goes to stdout.
int run_cli(const std::vector<std::string>& args, std::ostream& err);

}  // namespace roydennet
