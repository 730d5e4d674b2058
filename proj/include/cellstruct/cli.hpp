#pragma once

// Command-line front end. Exit codes: 0 success, 1 check failure, 2 usage or
// parse error.

#include <iosfwd>
#include <string>
#include <vector>

namespace cellstruct::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kDefaultDepth = 4;

/// Runs `cellstruct <args...>` (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cellstruct::cli
