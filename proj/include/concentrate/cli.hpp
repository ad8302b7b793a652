#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace concentrate {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk     = 0;
inline constexpr int kExitDomain = 1; // computation-domain error, or a check/convergence failure
inline constexpr int kExitUsage  = 2;

/// Parses `args` (without the program name), runs one subcommand and writes
/// its record to `out` (or to --out). Diagnostics go to `err`.
int parse_and_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace concentrate
