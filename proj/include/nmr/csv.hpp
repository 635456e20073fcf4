#pragma once

#include <cstdio>
#include <string>

namespace nmr {

/// 17 significant digits: enough to round-trip any 64-bit real.
inline std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace nmr
