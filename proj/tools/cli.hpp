#pragma once

#include <iosfwd>

namespace hyperalpha::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kViolation = 3,
};

/// Runs one invocation. Machine-readable output goes to `out` (or --out),
/// human summaries and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperalpha::cli
