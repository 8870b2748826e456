#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hccal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitFailure = 3;

/// Runs the command line `args` (args[0] is the program name). Failures are
/// reported as one JSON object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hccal::cli
