#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shrinkvb::cli {

enum ExitCode : int { kOk = 0, kIoError = 2, kValidationError = 3, kNumericalError = 4 };

/// Parse `args` (without the program name) and run the chosen subcommand.
/// Output files go where the flags say; anything destined for stdout is
/// written to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shrinkvb::cli
