#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kocrs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitResource = 4;

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless -o is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kocrs::cli
