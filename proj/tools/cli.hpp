#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace f0mc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitAlgorithm = 3;

/// Runs one command line (args excludes the program name) and returns the
/// exit status. Output and diagnostics go to the given streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace f0mc
