#pragma once

#include <cstdio>
#include <string>

namespace ptlz::detail {

// 17 significant digits: round-trips a double exactly and keeps output
// byte-stable across runs.
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace ptlz::detail
