#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace hyperalpha {

/// Rounds to `digits` significant decimal digits so serialized reports are
/// stable across platforms.
inline double round_sig(double x, int digits = 12) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

/// Report number: rounded, with non-finite values as null.
inline nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig(x);
}

}  // namespace hyperalpha
