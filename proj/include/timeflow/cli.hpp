#pragma once

#include <iosfwd>

namespace timeflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `timeflow` command. Results go to `out` (or --out
/// files), diagnostics to `err`. Returns 0 on success, 1 when the input has
/// validation violations, 2 on usage errors and unreadable input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace timeflow::cli
