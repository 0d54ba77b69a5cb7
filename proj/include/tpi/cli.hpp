#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tpi::cli {

/// Process exit codes.
enum ExitCode : int { ok = 0, config_error = 2, numerical_error = 3 };

/// Runs one CLI invocation. args excludes the program name. Primary output
/// goes to `out` unless --out names a file; errors go to `err` as a JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tpi::cli
