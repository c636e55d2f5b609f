#pragma once

#include <functional>
#include <vector>

#include "cliff/multiindex.hpp"
#include "cliff/multivector.hpp"
#include "cliff/paravector.hpp"

namespace cliff {

/// Ordered directions h1..hq for mixed directional derivatives.
using DirectionList = std::vector<Paravector>;

inline constexpr int kMaxDirections = 6;

/// Exact mixed directional derivative of x -> x^{-1}:
///   (h1|grad)...(hq|grad)(x^{-1})
///     = (-1)^q sum over all q! orderings sigma of
///       x^{-1} h_{sigma(1)} x^{-1} ... h_{sigma(q)} x^{-1}.
/// With all directions equal to h this collapses to (-1)^q q! (x^{-1}h)^q x^{-1}.
Paravector dir_deriv_inverse(const Paravector& x, const DirectionList& dirs);

/// Central-difference mixed directional derivative of f at x; O(step^2).
Multivector fd_dir_deriv(const std::function<Multivector(const Paravector&)>& f,
                         const Paravector& x, const DirectionList& dirs,
                         double step);

/// Finite-difference D(Laplacian(f)) at x, where D = sum_i e_i d/dx_i over
/// the four paravector coordinates.  Near-zero output certifies holomorphy.
Multivector apply_DDelta(
    const std::function<Multivector(const Paravector&)>& f,
    const Paravector& x, double step);

/// Finite-difference bi-Laplacian of a scalar field; plain O(step^2).
double fd_bilaplacian(const std::function<double(const Paravector&)>& f,
                      const Paravector& x, double step);

/// Lift of a planar holomorphic function u + iv to S+V:
///   F(x) = u(x0, |vec x|) + (vec x / |vec x|) v(x0, |vec x|).
/// On the axis |vec x| = 0 the limit u(x0, 0) is used; v(x0, 0) must vanish.
Paravector axial_lift(const std::function<double(double, double)>& u,
                       const std::function<double(double, double)>& v,
                       const Paravector& x);

}  // namespace cliff
