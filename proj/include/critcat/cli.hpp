#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace critcat {

/// Exit codes: 0 success, 1 validation or scoring failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the critcat command line. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace critcat
