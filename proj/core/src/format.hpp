#pragma once

#include <cstdio>
#include <string>

namespace quasilat::detail {

// 12 significant digits, the precision used for every emitted float.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace quasilat::detail
