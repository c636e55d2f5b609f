#include "cliff/multivector.hpp"

#include <ostream>

namespace cliff {

std::ostream& operator<<(std::ostream& os, const Multivector& m) {
  static const char* kNames[8] = {"1",   "e1",  "e2",  "e3",
                                  "e12", "e13", "e23", "e123"};
  bool first = true;
  for (int i = 0; i < 8; ++i) {
    const double v = m.c[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    const double a = v < 0 ? -v : v;
    if (i == 0)
      os << a;
    else
      os << a << "*" << kNames[i];
    first = false;
  }
  if (first) os << "0";
  return os;
}

}  // namespace cliff
