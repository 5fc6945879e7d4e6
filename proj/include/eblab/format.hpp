#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace eblab {

/// Shortest round-trippable decimal form of a double.
inline std::string format_real(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace eblab
