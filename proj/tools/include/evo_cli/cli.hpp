#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotFound = 1;     // ClassificationFailed, or iso not found under --require-found
inline constexpr int kExitBadInput = 2;     // invalid flags, files or parameters
inline constexpr int kExitTolerance = 3;    // a witness failed independent re-verification

/// args excludes the program name. Writes the report to `out` and
/// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evo::cli
