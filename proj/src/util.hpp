#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace growthlab::detail {

inline std::string num(double v, int digits = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline constexpr double kInf = HUGE_VAL;

}  // namespace growthlab::detail
