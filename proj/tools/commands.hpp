#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tosi::cli {

enum ExitCode : int { ok = 0, input_error = 2, numerical_failure = 3 };

/// Runs the command line `args` (without the program name). JSON goes to the
/// --out file or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Penalty grid from "a,b,c" or "min:max:count" (geometric, largest
/// first). Throws InputError for malformed or empty grids.
std::vector<double> parse_grid(const std::string& text);

/// Default worker count from the TOSI_THREADS environment variable (0 when
/// unset or invalid).
int env_threads();

}  // namespace tosi::cli
