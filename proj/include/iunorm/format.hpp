#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace iunorm {

// Shortest round-trip decimal form; locale independent for our inputs.
inline std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace iunorm
