#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multgame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;

/// Runs the command line `args` (args[0] is the program name) against the
/// given streams and returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace multgame
