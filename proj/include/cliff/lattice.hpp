#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cliff/errors.hpp"
#include "cliff/paravector.hpp"

namespace cliff {

/// Rank-N period lattice 2Z^N omega in S+V, generated by doubled
/// half-periods 2*omega_1 .. 2*omega_N.
class Lattice {
 public:
  Lattice(int rank, const std::vector<Paravector>& half_periods);

  int rank() const { return rank_; }
  const Paravector& omega(int j) const {
    return omega_[static_cast<std::size_t>(j)];
  }

  /// Smallest singular value of the 4xN matrix whose columns are the
  /// doubled periods 2*omega_j.  Certifies linear independence and bounds
  /// every lattice point: |point(k)| >= sigma_min * max|k_j|.
  double sigma_min() const { return sigma_min_; }

  /// Euclidean norm of the shortest nonzero lattice point.
  double min_point_norm() const { return min_point_norm_; }

  /// 2(k_1 omega_1 + ... + k_N omega_N).
  Paravector point(const std::array<int, 4>& k) const;

  /// Euclidean distance from x to the nearest lattice point (origin
  /// included).
  double nearest_point_distance(const Paravector& x) const;

 private:
  int rank_;
  std::array<Paravector, 4> omega_{};
  double sigma_min_ = 0;
  double min_point_norm_ = 0;
  // Gram inverse of the doubled-period matrix, for nearest-point queries.
  std::array<std::array<double, 4>, 4> gram_inv_{};
};

/// Truncation / summation policy for the lattice series.
struct SumConfig {
  int max_shells = 0;      // 0: use the rank default
  double target_tol = 0;   // 0: use the rank default
  bool pairing = true;     // sum (w, -w) jointly
  bool compensated = true; // Kahan accumulation
  double pole_guard = 1e-8;
  // When the tail bound still exceeds target_tol at max_shells: throw
  // Unconverged (true) or return the max_shells result with its honest
  // bound (false).
  bool error_on_unconverged = true;
  int workers = 1;

  /// Applies rank defaults to unset fields.
  SumConfig resolved(int rank) const;
};

struct ShellPoint {
  std::array<int, 4> index;
  Paravector w;
};

/// All lattice points with Chebyshev index norm max|k_j| = k, each exactly
/// once, in a fixed deterministic order with w and -w adjacent.
std::vector<ShellPoint> shell_points(const Lattice& L, int k);

/// Visits one representative per (w, -w) pair of shell k, in the same fixed
/// order as shell_points (the representative has positive leading index).
void for_each_shell_pair(
    const Lattice& L, int k,
    const std::function<void(const std::array<int, 4>&, const Paravector&)>&
        fn);

/// Number of points in shell k: (2k+1)^rank - (2k-1)^rank.
long long shell_count(int rank, int k);

/// Rigorous bound on the norm of the discarded remainder of the zeta_N
/// series beyond shell K, valid for all |x| <= r.  With `paired` the bound
/// uses the extra decay order of joint (w, -w) summation.
double tail_bound(const Lattice& L, int N, double r, int K,
                  bool paired = true);

/// Same for the exact termwise mixed directional derivative of order q with
/// direction-norm product prod_h.  q = 0 reduces to tail_bound.
double tail_bound_deriv(const Lattice& L, int N, double r, int K, int q,
                        double prod_h, bool paired = true);

}  // namespace cliff
