#pragma once

#include <iosfwd>

namespace taglm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

/// Entry point of the `taglm` tool. Writes results to `out` and diagnostics
/// to `err`; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace taglm::cli
