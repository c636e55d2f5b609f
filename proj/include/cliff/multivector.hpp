#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>

namespace cliff {

// Blade basis order, fixed throughout the library:
//   index 0: 1      (scalar)
//   index 1: e1     index 2: e2     index 3: e3
//   index 4: e12    index 5: e13    index 6: e23
//   index 7: e123
// Generators satisfy e_i e_j + e_j e_i = -2 delta_ij for i,j in {1,2,3},
// and e0 = 1 is the identity.

namespace detail {

// Bit mask of generators for each blade in basis order.
inline constexpr std::array<unsigned, 8> kBladeMask = {0b000, 0b001, 0b010,
                                                       0b100, 0b011, 0b101,
                                                       0b110, 0b111};
// Inverse map: generator mask -> basis index.
inline constexpr std::array<int, 8> kMaskToIndex = {0, 1, 2, 4, 3, 5, 6, 7};

struct CayleyTable {
  std::int8_t sign[8][8];
  std::uint8_t index[8][8];
};

// The product table is generated from the anticommutation relations alone:
// moving each generator of b past the higher generators of a costs one sign
// each, and every repeated generator squares to -1.
constexpr CayleyTable make_cayley_table() {
  CayleyTable t{};
  for (int ia = 0; ia < 8; ++ia) {
    for (int ib = 0; ib < 8; ++ib) {
      const unsigned a = kBladeMask[ia];
      const unsigned b = kBladeMask[ib];
      int sign = 1;
      for (unsigned j = 0; j < 3; ++j) {
        if (!(b & (1u << j))) continue;
        for (unsigned i = j + 1; i < 3; ++i) {
          if (a & (1u << i)) sign = -sign;
        }
      }
      unsigned common = a & b;
      for (unsigned j = 0; j < 3; ++j) {
        if (common & (1u << j)) sign = -sign;
      }
      t.sign[ia][ib] = static_cast<std::int8_t>(sign);
      t.index[ia][ib] = static_cast<std::uint8_t>(kMaskToIndex[a ^ b]);
    }
  }
  return t;
}

inline constexpr CayleyTable kCayley = make_cayley_table();

}  // namespace detail

/// Element of the Clifford algebra R_{0,3} as 8 real coefficients over the
/// blade basis {1, e1, e2, e3, e12, e13, e23, e123}.
struct Multivector {
  std::array<double, 8> c{};

  constexpr Multivector() = default;
  static constexpr Multivector scalar(double s) {
    Multivector m;
    m.c[0] = s;
    return m;
  }
  static constexpr Multivector basis(int blade_index, double coeff = 1.0) {
    Multivector m;
    m.c[static_cast<std::size_t>(blade_index)] = coeff;
    return m;
  }

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend Multivector operator+(const Multivector& a, const Multivector& b) {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Multivector operator-(const Multivector& a, const Multivector& b) {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend Multivector operator-(const Multivector& a) {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = -a.c[i];
    return r;
  }
  friend Multivector operator*(double s, const Multivector& a) {
    Multivector r;
    for (int i = 0; i < 8; ++i) r.c[i] = s * a.c[i];
    return r;
  }
  friend Multivector operator*(const Multivector& a, double s) { return s * a; }
  Multivector& operator+=(const Multivector& b) {
    for (int i = 0; i < 8; ++i) c[i] += b.c[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& b) {
    for (int i = 0; i < 8; ++i) c[i] -= b.c[i];
    return *this;
  }

  double norm_sq() const {
    double s = 0;
    for (double x : c) s += x * x;
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  /// Projection onto the blades of grade g (0..3).  The four projections
  /// partition the coefficient array, so their sum reproduces the element
  /// bit for bit.
  Multivector grade(int g) const {
    static constexpr int kGrade[8] = {0, 1, 1, 1, 2, 2, 2, 3};
    Multivector r;
    for (int i = 0; i < 8; ++i)
      if (kGrade[i] == g) r.c[i] = c[i];
    return r;
  }

  /// Euclidean magnitude of the grade-2 and grade-3 part.
  double grade23_residue() const {
    return std::sqrt(c[4] * c[4] + c[5] * c[5] + c[6] * c[6] + c[7] * c[7]);
  }
};

/// Geometric product in R_{0,3}; signs come from the generated Cayley table.
inline Multivector geometric_product(const Multivector& a,
                                     const Multivector& b) {
  Multivector r;
  for (int i = 0; i < 8; ++i) {
    const double ai = a.c[i];
    if (ai == 0.0) continue;
    for (int j = 0; j < 8; ++j) {
      r.c[detail::kCayley.index[i][j]] +=
          detail::kCayley.sign[i][j] * ai * b.c[j];
    }
  }
  return r;
}

inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

std::ostream& operator<<(std::ostream& os, const Multivector& m);

}  // namespace cliff
