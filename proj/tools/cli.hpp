#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dicke::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "DICKE_WORKERS";

/// Runs the command line `args` (without the program name).  Tables go to
/// `out` unless --out is given; diagnostics and summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dicke::cli
