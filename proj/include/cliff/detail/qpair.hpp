#pragma once

#include <array>
#include <cmath>

#include "cliff/multivector.hpp"
#include "cliff/paravector.hpp"

namespace cliff::detail {

// R_{0,3} splits as a direct sum of two quaternion ideals through the central
// pseudoscalar w = e123 with w^2 = +1.  All heavy products in the library run
// in this split: a paravector maps to the same 4-vector in both ideals, the
// product becomes a pair of quaternion products (with opposite handedness),
// and an element is a paravector iff the two components agree.

/// Quaternion product with handedness sign s = +1 or -1 applied to the
/// cross term.  s = -sigma for the sigma ideal of R_{0,3}.
inline std::array<double, 4> qmul(const std::array<double, 4>& u,
                                  const std::array<double, 4>& v, double s) {
  return {u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3],
          u[0] * v[1] + u[1] * v[0] + s * (u[2] * v[3] - u[3] * v[2]),
          u[0] * v[2] + u[2] * v[0] + s * (u[3] * v[1] - u[1] * v[3]),
          u[0] * v[3] + u[3] * v[0] + s * (u[1] * v[2] - u[2] * v[1])};
}

struct QPair {
  std::array<double, 4> p{};  // sigma = +1 ideal
  std::array<double, 4> m{};  // sigma = -1 ideal

  static QPair from_multivector(const Multivector& a) {
    QPair q;
    // q_sigma = (a0 + s a123, a1 - s a23, a2 + s a13, a3 - s a12)
    q.p = {a.c[0] + a.c[7], a.c[1] - a.c[6], a.c[2] + a.c[5], a.c[3] - a.c[4]};
    q.m = {a.c[0] - a.c[7], a.c[1] + a.c[6], a.c[2] - a.c[5], a.c[3] + a.c[4]};
    return q;
  }

  static QPair from_paravector(const Paravector& x) {
    QPair q;
    q.p = {x.x0, x.x1, x.x2, x.x3};
    q.m = q.p;
    return q;
  }

  Multivector to_multivector() const {
    Multivector a;
    a.c[0] = 0.5 * (p[0] + m[0]);
    a.c[1] = 0.5 * (p[1] + m[1]);
    a.c[2] = 0.5 * (p[2] + m[2]);
    a.c[3] = 0.5 * (p[3] + m[3]);
    a.c[7] = 0.5 * (p[0] - m[0]);
    a.c[6] = -0.5 * (p[1] - m[1]);
    a.c[5] = 0.5 * (p[2] - m[2]);
    a.c[4] = -0.5 * (p[3] - m[3]);
    return a;
  }

  friend QPair operator*(const QPair& a, const QPair& b) {
    QPair r;
    r.p = qmul(a.p, b.p, -1.0);
    r.m = qmul(a.m, b.m, +1.0);
    return r;
  }
  friend QPair operator+(const QPair& a, const QPair& b) {
    QPair r;
    for (int i = 0; i < 4; ++i) {
      r.p[i] = a.p[i] + b.p[i];
      r.m[i] = a.m[i] + b.m[i];
    }
    return r;
  }
  friend QPair operator-(const QPair& a, const QPair& b) {
    QPair r;
    for (int i = 0; i < 4; ++i) {
      r.p[i] = a.p[i] - b.p[i];
      r.m[i] = a.m[i] - b.m[i];
    }
    return r;
  }
  friend QPair operator*(double s, const QPair& a) {
    QPair r;
    for (int i = 0; i < 4; ++i) {
      r.p[i] = s * a.p[i];
      r.m[i] = s * a.m[i];
    }
    return r;
  }
  QPair& operator+=(const QPair& b) {
    for (int i = 0; i < 4; ++i) {
      p[i] += b.p[i];
      m[i] += b.m[i];
    }
    return *this;
  }
};

}  // namespace cliff::detail
