#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace nlroth {

/// Report numbers carry 12 significant digits.
inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// v rounded to 12 significant digits, for JSON emitters that print shortest round-trip forms.
inline double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

}  // namespace nlroth
