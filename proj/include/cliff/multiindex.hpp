#pragma once

#include <array>
#include <cstdint>

#include "cliff/errors.hpp"

namespace cliff {

/// Multi-index over the four paravector directions e0..e3.
struct MultiIndex {
  std::array<int, 4> a{};

  constexpr MultiIndex() = default;
  constexpr MultiIndex(int a0, int a1, int a2, int a3) : a{a0, a1, a2, a3} {}

  int operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return a[static_cast<std::size_t>(i)]; }

  int degree() const { return a[0] + a[1] + a[2] + a[3]; }

  void validate() const {
    for (int v : a)
      if (v < 0) throw BadIndexError("multi-index entries must be >= 0");
  }

  /// Product of factorials of the entries.
  double factorial_prod() const {
    double r = 1.0;
    for (int v : a)
      for (int k = 2; k <= v; ++k) r *= k;
    return r;
  }

  /// degree! / (a0! a1! a2! a3!), the number of distinct orderings.
  double multinomial() const {
    double r = 1.0;
    int placed = 0;
    for (int v : a) {
      for (int k = 1; k <= v; ++k) {
        ++placed;
        r = r * placed / k;
      }
    }
    return r;
  }

  bool operator==(const MultiIndex& o) const { return a == o.a; }
};

}  // namespace cliff
