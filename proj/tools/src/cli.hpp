#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covkit::cli {

inline constexpr int kExitOk = 0;
/// A verification ran and reported ok = false.
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

/// Runs one command line (without the program name). Reports go to `out` as canonical JSON,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covkit::cli
