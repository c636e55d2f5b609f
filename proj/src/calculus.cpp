#include "cliff/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "cliff/errors.hpp"

namespace cliff {

Paravector dir_deriv_inverse(const Paravector& x, const DirectionList& dirs) {
  const int q = static_cast<int>(dirs.size());
  if (q < 1 || q > kMaxDirections)
    throw BadIndexError("dir_deriv_inverse: need 1..6 directions");
  const Multivector xi = inverse(x).to_multivector();

  std::vector<int> order(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) order[static_cast<std::size_t>(i)] = i;
  // Sum over all q! orderings (repeats included when directions repeat).
  Multivector acc;
  std::vector<Multivector> hm;
  hm.reserve(dirs.size());
  for (const auto& h : dirs) hm.push_back(h.to_multivector());
  do {
    Multivector term = xi;
    for (int idx : order) term = term * hm[static_cast<std::size_t>(idx)] * xi;
    acc += term;
  } while (std::next_permutation(order.begin(), order.end()));
  if (q % 2 == 1) acc = -acc;
  return extract_paravector(acc);
}

Multivector fd_dir_deriv(
    const std::function<Multivector(const Paravector&)>& f,
    const Paravector& x, const DirectionList& dirs, double step) {
  const int q = static_cast<int>(dirs.size());
  if (q < 1 || q > kMaxDirections)
    throw BadIndexError("fd_dir_deriv: need 1..6 directions");
  // Tensor-product central stencil: 2^q evaluations with sign prod(eps).
  Multivector acc;
  const int combos = 1 << q;
  for (int mask = 0; mask < combos; ++mask) {
    Paravector p = x;
    int sign = 1;
    for (int i = 0; i < q; ++i) {
      const double eps = (mask >> i) & 1 ? 1.0 : -1.0;
      if (eps < 0) sign = -sign;
      p += eps * step * dirs[static_cast<std::size_t>(i)];
    }
    Multivector v = f(p);
    acc += (sign > 0 ? 1.0 : -1.0) * v;
  }
  const double scale = std::pow(2.0 * step, -q);
  return scale * acc;
}

namespace {

Paravector coord_axis(int i) {
  Paravector p;
  if (i == 0)
    p.x0 = 1;
  else if (i == 1)
    p.x1 = 1;
  else if (i == 2)
    p.x2 = 1;
  else
    p.x3 = 1;
  return p;
}

}  // namespace

Multivector apply_DDelta(
    const std::function<Multivector(const Paravector&)>& f,
    const Paravector& x, double step) {
  auto laplacian = [&](const Paravector& y) {
    Multivector acc = -8.0 * f(y);
    for (int j = 0; j < 4; ++j) {
      const Paravector ej = coord_axis(j);
      acc += f(y + step * ej) + f(y - step * ej);
    }
    return (1.0 / (step * step)) * acc;
  };
  Multivector out;
  for (int i = 0; i < 4; ++i) {
    const Paravector ei = coord_axis(i);
    const Multivector di =
        (1.0 / (2.0 * step)) *
        (laplacian(x + step * ei) - laplacian(x - step * ei));
    out += Multivector::basis(i) * di;
  }
  return out;
}

double fd_bilaplacian(const std::function<double(const Paravector&)>& f,
                      const Paravector& x, double step) {
  auto laplacian = [&](const Paravector& y) {
    double acc = -8.0 * f(y);
    for (int j = 0; j < 4; ++j) {
      const Paravector ej = coord_axis(j);
      acc += f(y + step * ej) + f(y - step * ej);
    }
    return acc / (step * step);
  };
  double acc = -8.0 * laplacian(x);
  for (int j = 0; j < 4; ++j) {
    const Paravector ej = coord_axis(j);
    acc += laplacian(x + step * ej) + laplacian(x - step * ej);
  }
  return acc / (step * step);
}

Paravector axial_lift(const std::function<double(double, double)>& u,
                       const std::function<double(double, double)>& v,
                       const Paravector& x) {
  const double t = x.vec_norm();
  if (t < 1e-300) {
    const double v0 = v(x.x0, 0.0);
    if (std::abs(v0) > 1e-12)
      throw AxisSingularityError(
          "axial_lift: v(x0, 0) != 0 on the vector-free axis");
    return {u(x.x0, 0.0), 0, 0, 0};
  }
  const double uu = u(x.x0, t);
  const double vv = v(x.x0, t) / t;
  return {uu, x.x1 * vv, x.x2 * vv, x.x3 * vv};
}

}  // namespace cliff
