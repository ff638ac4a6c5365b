#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace bayesmi {

// 17 significant digits: enough for any double to parse back bitwise equal.
inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf);
}

}  // namespace bayesmi
