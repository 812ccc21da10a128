#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdepth {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitNumeric = 3 };

/// Runs the command-line interface. `args` includes the program name.
/// Results go to `out` only when the command succeeds; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdepth
