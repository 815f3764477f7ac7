#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace fagg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNonConvergence = 4;

/// Runs one command. `args` excludes the program name. Data goes to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fagg::cli
