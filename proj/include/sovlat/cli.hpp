#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sovlat {

/// Exit codes of the command-line front end.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. JSON reports go to
/// `out`, diagnostics to `err`. Returns kExitPass only when every check in
/// scope passes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sovlat
