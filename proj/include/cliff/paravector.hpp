#pragma once

#include <cmath>

#include "cliff/errors.hpp"
#include "cliff/multivector.hpp"

namespace cliff {

/// Paravector x = x0 + x1 e1 + x2 e2 + x3 e3, the natural domain of the
/// function library.  Stored densely; conversion to/from Multivector is
/// explicit so grade leaks are caught at the boundary.
struct Paravector {
  double x0 = 0, x1 = 0, x2 = 0, x3 = 0;

  constexpr Paravector() = default;
  constexpr Paravector(double a0, double a1, double a2, double a3)
      : x0(a0), x1(a1), x2(a2), x3(a3) {}

  Multivector to_multivector() const {
    Multivector m;
    m.c[0] = x0;
    m.c[1] = x1;
    m.c[2] = x2;
    m.c[3] = x3;
    return m;
  }

  double norm_sq() const { return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3; }
  double norm() const { return std::sqrt(norm_sq()); }
  double vec_norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

  /// Clifford conjugate x* = x0 - vec(x).
  Paravector conjugate() const { return {x0, -x1, -x2, -x3}; }

  friend Paravector operator+(const Paravector& a, const Paravector& b) {
    return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
  }
  friend Paravector operator-(const Paravector& a, const Paravector& b) {
    return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
  }
  friend Paravector operator-(const Paravector& a) {
    return {-a.x0, -a.x1, -a.x2, -a.x3};
  }
  friend Paravector operator*(double s, const Paravector& a) {
    return {s * a.x0, s * a.x1, s * a.x2, s * a.x3};
  }
  friend Paravector operator*(const Paravector& a, double s) { return s * a; }
  Paravector& operator+=(const Paravector& b) {
    x0 += b.x0;
    x1 += b.x1;
    x2 += b.x2;
    x3 += b.x3;
    return *this;
  }
};

/// x^{-1} = x* / |x|^2.  Throws when |x| is too small to invert reliably.
inline Paravector inverse(const Paravector& x, double eps = 1e-14) {
  const double n2 = x.norm_sq();
  if (n2 < eps * eps) throw ZeroNormError("inverse of (near-)zero paravector");
  const double inv = 1.0 / n2;
  return {x.x0 * inv, -x.x1 * inv, -x.x2 * inv, -x.x3 * inv};
}

/// Extract the paravector part of a multivector, checking that the grade-2
/// and grade-3 content is negligible relative to the result.
inline Paravector extract_paravector(const Multivector& m,
                                     double tol = 1e-12) {
  Paravector p{m.c[0], m.c[1], m.c[2], m.c[3]};
  const double leak = m.grade23_residue();
  if (leak > tol * (1.0 + p.norm()))
    throw GradeLeakError("grade 2/3 residue " + std::to_string(leak) +
                         " exceeds paravector extraction tolerance");
  return p;
}

/// (hx)^n h computed in the full algebra, then extracted as a paravector.
/// S+V is closed under sandwich powers, so a grade leak here means an
/// arithmetic bug rather than a domain error.
inline Paravector sandwich_power(const Paravector& h, const Paravector& x,
                                 int n) {
  if (n < 0) throw BadIndexError("sandwich_power: n must be >= 0");
  const Multivector hm = h.to_multivector();
  const Multivector hx = hm * x.to_multivector();
  Multivector acc = Multivector::scalar(1.0);
  for (int i = 0; i < n; ++i) acc = acc * hx;
  return extract_paravector(acc * hm);
}

}  // namespace cliff
