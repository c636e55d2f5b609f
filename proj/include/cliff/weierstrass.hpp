#pragma once

#include <optional>
#include <vector>

#include "cliff/calculus.hpp"
#include "cliff/lattice.hpp"
#include "cliff/multiindex.hpp"
#include "cliff/paravector.hpp"

namespace cliff {

/// Which algebraic form of the zeta_N general term is summed.
enum class ZetaTermForm { Defining, Collapsed, PowerSeries };

/// A lattice-series value together with its truncation certificate.
struct EvalResult {
  Paravector value;
  int shells = 0;
  double bound = 0;  // rigorous bound on the discarded remainder
};

/// One evaluation sharing a lattice sweep with the others in its batch:
/// values (dirs empty) or exact termwise mixed derivatives (1..4 dirs).
struct LatticeTask {
  Paravector x;
  DirectionList dirs{};
};

/// Evaluates every task in one sweep over the lattice shells.  Shells are
/// processed in parallel across cfg.workers and reduced in fixed shell
/// order, so results do not depend on the worker count.
std::vector<EvalResult> zeta_batch(const Lattice& L,
                                   const std::vector<LatticeTask>& tasks,
                                   const SumConfig& cfg,
                                   ZetaTermForm form = ZetaTermForm::Collapsed);

/// zeta_N with N = L.rank().
EvalResult zeta_full(const Lattice& L, const Paravector& x,
                     const SumConfig& cfg,
                     ZetaTermForm form = ZetaTermForm::Collapsed);
Paravector zeta(const Lattice& L, const Paravector& x, const SumConfig& cfg,
                ZetaTermForm form = ZetaTermForm::Collapsed);

/// Exact termwise mixed directional derivative of zeta_N at a.
EvalResult zeta_dir_deriv(const Lattice& L, const Paravector& a,
                          const DirectionList& dirs, const SumConfig& cfg);

/// Z_N(x, a) = zeta_N(x+a) - sum_{n=0}^{N-1} (x|grad)^n/n! zeta_N(a);
/// periodic in a.
EvalResult Z(const Lattice& L, const Paravector& x, const Paravector& a,
             const SumConfig& cfg);

/// Quasi-period polynomial:
///   eta_N(x, omega) = 2 sum_{p=0}^{[(N+1)/2]-1}
///                     ((x+omega)|grad)^{2p}/(2p)! zeta_N(omega),
/// satisfying zeta_N(x + 2 omega) - zeta_N(x) = eta_N(x, omega).
EvalResult eta(const Lattice& L, const Paravector& x, const Paravector& omega,
               const SumConfig& cfg);

/// Caches zeta_N(omega) and the Hessian of zeta_N at omega so that
/// eta(x, omega) becomes a cheap degree-2 polynomial in x.
class EtaEvaluator {
 public:
  EtaEvaluator(const Lattice& L, const Paravector& omega,
               const SumConfig& cfg);

  EvalResult operator()(const Paravector& x) const;
  const Paravector& omega() const { return omega_; }

 private:
  int rank_;
  Paravector omega_;
  Paravector zeta_omega_;
  double zeta_bound_ = 0;
  int shells_ = 0;
  // hess_[i][j] = d_i d_j zeta_N(omega), symmetric.
  std::array<std::array<Paravector, 4>, 4> hess_{};
  double hess_bound_ = 0;  // per-component bound (unit directions)
  bool has_hessian_ = false;
};

/// p_alpha(x) = -(1/3!) (e|grad)^3 zeta_4 along the multiset of alpha
/// (|alpha| = 3); elliptic with order-4 poles on the lattice.
EvalResult p_alpha(const Lattice& L, const MultiIndex& alpha,
                   const Paravector& x, const SumConfig& cfg);

/// Direct series for alpha = (3,0,0,0):
///   x^{-4} + sum_w { (x-w)^{-4} - w^{-4} }.
EvalResult p_alpha_direct(const Lattice& L, const Paravector& x,
                          const SumConfig& cfg);

/// d/dx0 of p_{(3,0,0,0)}:  -4 [ x^{-5} + sum_w (x-w)^{-5} ].
EvalResult d0_p0(const Lattice& L, const Paravector& x, const SumConfig& cfg);

struct ZeroCandidate {
  Paravector x;
  double residual;    // |d0_p0| after refinement
  double tail_bound;  // truncation bound at the candidate
  bool is_vertex;     // matches one of the 15 half-period vertices
};

/// Grid scan of one fundamental cell for zeros of d0_p0, with local
/// refinement.  Best-effort exploration; never throws on non-convergence.
std::vector<ZeroCandidate> zero_scan(const Lattice& L, int grid_density,
                                     const SumConfig& cfg);

}  // namespace cliff
