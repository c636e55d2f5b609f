#pragma once

#include <cmath>

#include "cliff/errors.hpp"
#include "cliff/paravector.hpp"

namespace cliff {

namespace detail {

// sin(t)/t and sinh(t)/t with series fallback below the cancellation
// threshold.
inline double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0);
  }
  return std::sin(t) / t;
}

inline double sinhc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 + t2 / 6.0 * (1.0 + t2 / 20.0);
  }
  return std::sinh(t) / t;
}

}  // namespace detail

/// exp on S+V: e^{x0} (cos|vec x| + vec x * sinc|vec x|).  Restricted to any
/// commutative slice x0 + t*n this is the planar exponential of x0 + i t.
inline Paravector exp_cl(const Paravector& x) {
  const double t = x.vec_norm();
  const double e = std::exp(x.x0);
  const double s = e * detail::sinc(t);
  return {e * std::cos(t), s * x.x1, s * x.x2, s * x.x3};
}

/// sin lifted slice-wise: sin(x0 + i t) = sin x0 cosh t + i cos x0 sinh t.
inline Paravector sin_cl(const Paravector& x) {
  const double t = x.vec_norm();
  const double s = std::cos(x.x0) * detail::sinhc(t);
  return {std::sin(x.x0) * std::cosh(t), s * x.x1, s * x.x2, s * x.x3};
}

/// cos lifted slice-wise: cos(x0 + i t) = cos x0 cosh t - i sin x0 sinh t.
inline Paravector cos_cl(const Paravector& x) {
  const double t = x.vec_norm();
  const double s = -std::sin(x.x0) * detail::sinhc(t);
  return {std::cos(x.x0) * std::cosh(t), s * x.x1, s * x.x2, s * x.x3};
}

/// cotan = cos_cl * sin_cl^{-1} (right inverse; both orders agree on every
/// commutative slice, which covers the whole domain of these lifts).
inline Paravector cotan_cl(const Paravector& x, double eps = 1e-12) {
  const Paravector s = sin_cl(x);
  if (s.norm() < eps)
    throw PoleOfCotanError("cotan_cl: sin is (near-)zero at this point");
  const Paravector si = inverse(s);
  const Paravector c = cos_cl(x);
  // c and s live in the same slice, so the product stays a paravector.
  return extract_paravector(c.to_multivector() * si.to_multivector());
}

}  // namespace cliff
