#include "cliff/weierstrass.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "cliff/detail/qpair.hpp"

namespace cliff {

namespace {

using detail::QPair;
using Quat = std::array<double, 4>;

Quat to_quat(const Paravector& p) { return {p.x0, p.x1, p.x2, p.x3}; }
Paravector to_para(const Quat& q) { return {q[0], q[1], q[2], q[3]}; }

Quat quat_para_inv(const Quat& y) {
  const double n2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
  const double inv = 1.0 / n2;
  return {y[0] * inv, -y[1] * inv, -y[2] * inv, -y[3] * inv};
}

// Product of two elements of one commutative slice (powers of the same
// paravector); the cross term vanishes there.
Quat slice_mul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[2] * b[0],
          a[0] * b[3] + a[3] * b[0]};
}

enum class Kind { Value, Deriv, PDirect, D0P0 };

// Atoms of a derivative chain, evaluated per lattice point and sign.
constexpr int kAtomY = 0;  // (x - w)^{-1}
constexpr int kAtomW = 1;  // w^{-1}
constexpr int kAtomX = 2;  // x
constexpr int kAtomH = 3;  // kAtomH + s: direction h_s

struct Chain {
  double coeff;
  std::vector<int> atoms;
};

// Exact mixed derivative of the defining-form general term
//   (x-w)^{-1} + sum_{mu=0}^{N-1} (w^{-1}x)^mu w^{-1}
// as explicit product chains.  The polynomial part keeps only mu >= q.
std::vector<Chain> build_chains(int N, int q) {
  std::map<std::vector<int>, double> acc;
  // (h1|grad)...(hq|grad) (x-w)^{-1}
  //   = (-1)^q sum over orderings of Y h Y h ... h Y.
  std::vector<int> order(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) order[static_cast<std::size_t>(i)] = i;
  const double ysign = q % 2 == 0 ? 1.0 : -1.0;
  do {
    std::vector<int> chain{kAtomY};
    for (int s : order) {
      chain.push_back(kAtomH + s);
      chain.push_back(kAtomY);
    }
    acc[chain] += ysign;
  } while (std::next_permutation(order.begin(), order.end()));

  // Derivative of (w^{-1}x)^mu w^{-1} = W X W X ... X W: every injective
  // assignment of the q direction slots to the mu X positions.
  for (int mu = q; mu <= N - 1; ++mu) {
    std::vector<int> slots(static_cast<std::size_t>(mu), -1);
    // Enumerate assignments recursively.
    auto rec = [&](auto&& self, int s) -> void {
      if (s == q) {
        std::vector<int> chain{kAtomW};
        for (int pos = 0; pos < mu; ++pos) {
          const int a = slots[static_cast<std::size_t>(pos)];
          chain.push_back(a < 0 ? kAtomX : kAtomH + a);
          chain.push_back(kAtomW);
        }
        acc[chain] += 1.0;
        return;
      }
      for (int pos = 0; pos < mu; ++pos) {
        if (slots[static_cast<std::size_t>(pos)] >= 0) continue;
        slots[static_cast<std::size_t>(pos)] = s;
        self(self, s + 1);
        slots[static_cast<std::size_t>(pos)] = -1;
      }
    };
    rec(rec, 0);
  }
  std::vector<Chain> out;
  out.reserve(acc.size());
  for (auto& [chain, coeff] : acc) out.push_back({coeff, chain});
  return out;
}

struct Task {
  Kind kind;
  Paravector x;
  DirectionList dirs;
  ZetaTermForm form = ZetaTermForm::Collapsed;
  std::vector<Chain> chains;  // Deriv only
  double prod_h = 1.0;
};

struct Accum {
  QPair s{}, c{};
  void add(const QPair& v, bool compensated) {
    if (!compensated) {
      s += v;
      return;
    }
    for (int i = 0; i < 4; ++i) {
      {
        const double y = v.p[i] - c.p[i];
        const double t = s.p[i] + y;
        c.p[i] = (t - s.p[i]) - y;
        s.p[i] = t;
      }
      {
        const double y = v.m[i] - c.m[i];
        const double t = s.m[i] + y;
        c.m[i] = (t - s.m[i]) - y;
        s.m[i] = t;
      }
    }
  }
};

double task_tail_bound(const Lattice& L, const Task& t, int K, bool paired) {
  const int N = L.rank();
  const double r = t.x.norm();
  switch (t.kind) {
    case Kind::Value:
      return tail_bound(L, N, r, K, paired);
    case Kind::Deriv:
      return tail_bound_deriv(L, N, r, K, static_cast<int>(t.dirs.size()),
                              t.prod_h, paired);
    case Kind::PDirect:
      return tail_bound_deriv(L, 4, r, K, 3, 1.0, paired) / 6.0;
    case Kind::D0P0:
      return tail_bound_deriv(L, 4, r, K, 4, 1.0, paired) / 6.0;
  }
  return 0;
}

// ---- per-pair evaluation kernels ------------------------------------------

// Value of the collapsed term for the pair (w, -w), fused:
//   N even: (w^{-1}x)^N [ (x-w)^{-1} + (x+w)^{-1} ]
//   N odd:  (w^{-1}x)^N [ (x-w)^{-1} - (x+w)^{-1} ]
template <int N, bool kCompensated>
void value_kernel_paired(const Paravector& w, const Paravector& wi,
                         const double* __restrict x0s,
                         const double* __restrict x1s,
                         const double* __restrict x2s,
                         const double* __restrict x3s, int lanes,
                         double* __restrict acc, double* __restrict comp) {
  const double wi0 = wi.x0, wi1 = wi.x1, wi2 = wi.x2, wi3 = wi.x3;
  const double w0 = w.x0, w1 = w.x1, w2 = w.x2, w3 = w.x3;
  for (int l = 0; l < lanes; ++l) {
    const double x0 = x0s[l], x1 = x1s[l], x2 = x2s[l], x3 = x3s[l];
    // a = wi * x in each ideal (handedness s = -sigma).
    double ap0, ap1, ap2, ap3, am0, am1, am2, am3;
    {
      const double c0 = wi0 * x0 - wi1 * x1 - wi2 * x2 - wi3 * x3;
      const double d1 = wi0 * x1 + wi1 * x0;
      const double d2 = wi0 * x2 + wi2 * x0;
      const double d3 = wi0 * x3 + wi3 * x0;
      const double e1 = wi2 * x3 - wi3 * x2;
      const double e2 = wi3 * x1 - wi1 * x3;
      const double e3 = wi1 * x2 - wi2 * x1;
      ap0 = c0; ap1 = d1 - e1; ap2 = d2 - e2; ap3 = d3 - e3;
      am0 = c0; am1 = d1 + e1; am2 = d2 + e2; am3 = d3 + e3;
    }
    // a^N via squarings, per ideal; q*q has no cross term in either ideal.
    auto qsq = [](double& a0, double& a1, double& a2, double& a3) {
      const double n0 = a0 * a0 - a1 * a1 - a2 * a2 - a3 * a3;
      const double t1 = 2.0 * a0 * a1;
      const double t2 = 2.0 * a0 * a2;
      const double t3 = 2.0 * a0 * a3;
      a0 = n0; a1 = t1; a2 = t2; a3 = t3;
    };
    double pN0 = ap0, pN1 = ap1, pN2 = ap2, pN3 = ap3;
    double mN0 = am0, mN1 = am1, mN2 = am2, mN3 = am3;
    if constexpr (N >= 2) {
      qsq(pN0, pN1, pN2, pN3);
      qsq(mN0, mN1, mN2, mN3);
    }
    if constexpr (N == 3) {
      // a^3 = a^2 * a
      double r0 = pN0 * ap0 - pN1 * ap1 - pN2 * ap2 - pN3 * ap3;
      double r1 = pN0 * ap1 + pN1 * ap0 - (pN2 * ap3 - pN3 * ap2);
      double r2 = pN0 * ap2 + pN2 * ap0 - (pN3 * ap1 - pN1 * ap3);
      double r3 = pN0 * ap3 + pN3 * ap0 - (pN1 * ap2 - pN2 * ap1);
      pN0 = r0; pN1 = r1; pN2 = r2; pN3 = r3;
      r0 = mN0 * am0 - mN1 * am1 - mN2 * am2 - mN3 * am3;
      r1 = mN0 * am1 + mN1 * am0 + (mN2 * am3 - mN3 * am2);
      r2 = mN0 * am2 + mN2 * am0 + (mN3 * am1 - mN1 * am3);
      r3 = mN0 * am3 + mN3 * am0 + (mN1 * am2 - mN2 * am1);
      mN0 = r0; mN1 = r1; mN2 = r2; mN3 = r3;
    }
    if constexpr (N == 4) {
      qsq(pN0, pN1, pN2, pN3);
      qsq(mN0, mN1, mN2, mN3);
    }
    // y+ = (x-w)^{-1}, y- = (x+w)^{-1} (paravectors: same in both ideals).
    const double dp0 = x0 - w0, dp1 = x1 - w1, dp2 = x2 - w2, dp3 = x3 - w3;
    const double dm0 = x0 + w0, dm1 = x1 + w1, dm2 = x2 + w2, dm3 = x3 + w3;
    const double ip = 1.0 / (dp0 * dp0 + dp1 * dp1 + dp2 * dp2 + dp3 * dp3);
    const double im = 1.0 / (dm0 * dm0 + dm1 * dm1 + dm2 * dm2 + dm3 * dm3);
    const double yp0 = dp0 * ip, yp1 = -(dp1 * ip), yp2 = -(dp2 * ip),
                 yp3 = -(dp3 * ip);
    const double ym0 = dm0 * im, ym1 = -(dm1 * im), ym2 = -(dm2 * im),
                 ym3 = -(dm3 * im);
    // term = a^N y+ +- a^N y- in each ideal.  The two products are formed
    // separately before combining so that truncated zeta stays exactly odd
    // under x -> -x even when the compiler contracts to FMAs.
    auto qmul_s = [](double s, const double a[4], double b0, double b1,
                     double b2, double b3, double r[4]) {
      r[0] = a[0] * b0 - a[1] * b1 - a[2] * b2 - a[3] * b3;
      r[1] = a[0] * b1 + a[1] * b0 + s * (a[2] * b3 - a[3] * b2);
      r[2] = a[0] * b2 + a[2] * b0 + s * (a[3] * b1 - a[1] * b3);
      r[3] = a[0] * b3 + a[3] * b0 + s * (a[1] * b2 - a[2] * b1);
    };
    const double aNp[4] = {pN0, pN1, pN2, pN3};
    const double aNm[4] = {mN0, mN1, mN2, mN3};
    double up[4], vp[4], um[4], vm[4];
    qmul_s(-1.0, aNp, yp0, yp1, yp2, yp3, up);
    qmul_s(-1.0, aNp, ym0, ym1, ym2, ym3, vp);
    qmul_s(+1.0, aNm, yp0, yp1, yp2, yp3, um);
    qmul_s(+1.0, aNm, ym0, ym1, ym2, ym3, vm);
    double vals[8];
    if constexpr (N % 2 == 0) {
      for (int i = 0; i < 4; ++i) vals[i] = up[i] + vp[i];
      for (int i = 0; i < 4; ++i) vals[4 + i] = um[i] + vm[i];
    } else {
      for (int i = 0; i < 4; ++i) vals[i] = up[i] - vp[i];
      for (int i = 0; i < 4; ++i) vals[4 + i] = um[i] - vm[i];
    }
    double* a = acc + 8 * l;
    if constexpr (kCompensated) {
      double* c = comp + 8 * l;
      for (int i = 0; i < 8; ++i) {
        const double y = vals[i] - c[i];
        const double t = a[i] + y;
        c[i] = (t - a[i]) - y;
        a[i] = t;
      }
    } else {
      for (int i = 0; i < 8; ++i) a[i] += vals[i];
    }
  }
}

using ValueKernel = void (*)(const Paravector&, const Paravector&,
                             const double*, const double*, const double*,
                             const double*, int, double*, double*);

ValueKernel pick_value_kernel(int N, bool compensated) {
  switch (N * 2 + (compensated ? 1 : 0)) {
    case 2 * 1 + 0: return &value_kernel_paired<1, false>;
    case 2 * 1 + 1: return &value_kernel_paired<1, true>;
    case 2 * 2 + 0: return &value_kernel_paired<2, false>;
    case 2 * 2 + 1: return &value_kernel_paired<2, true>;
    case 2 * 3 + 0: return &value_kernel_paired<3, false>;
    case 2 * 3 + 1: return &value_kernel_paired<3, true>;
    case 2 * 4 + 0: return &value_kernel_paired<4, false>;
    case 2 * 4 + 1: return &value_kernel_paired<4, true>;
  }
  throw RankError("unsupported zeta order");
}

// Scalar fallbacks -----------------------------------------------------------

QPair qpow(const QPair& a, int n) {
  QPair r = a;
  for (int i = 1; i < n; ++i) r = r * a;
  return r;
}

// Collapsed / defining value contribution of a single point sw (sign
// applied), not fused with its mate.
QPair value_single(int N, ZetaTermForm form, const Paravector& x,
                   const Paravector& w, const Paravector& wi) {
  const QPair wq = QPair::from_paravector(wi);
  const QPair xq = QPair::from_paravector(x);
  const QPair a = wq * xq;
  const QPair y = QPair::from_paravector(inverse(x - w));
  if (form == ZetaTermForm::Collapsed) return qpow(a, N) * y;
  // Defining: (x-w)^{-1} + sum_{mu<N} (w^{-1}x)^mu w^{-1}
  QPair poly = wq;
  QPair ap = a;
  for (int mu = 1; mu < N; ++mu) {
    poly += ap * wq;
    ap = ap * a;
  }
  return y + poly;
}

// Power-series contribution of the pair (w, -w); returns the pair term and
// adds its own series cutoff slack to *extra_bound.
QPair power_series_pair(int N, bool paired, const Paravector& x,
                        const Paravector& w, const Paravector& wi,
                        double* extra_bound) {
  const QPair wq = QPair::from_paravector(wi);
  const QPair xq = QPair::from_paravector(x);
  const QPair a = wq * xq;
  const QPair a2 = a * a;
  const double t = x.norm() / w.norm();
  QPair sum{};
  if (paired) {
    const int n0 = 2 * (N / 2) + 1;
    QPair p = qpow(a, n0);
    double tn = std::pow(t, n0);
    for (int n = n0; n <= 601; n += 2) {
      sum += 2.0 * (p * wq);
      p = p * a2;
      tn *= t * t;
      if (tn / w.norm() < 1e-18 * (1.0 + t)) {
        *extra_bound += 2.0 * tn / (w.norm() * (1.0 - t * t));
        return sum;
      }
    }
    *extra_bound += 2.0 * tn / (w.norm() * (1.0 - t * t));
    return sum;
  }
  // Unpaired: full series from n = N for both signs.
  for (int sgn = 0; sgn < 2; ++sgn) {
    const double s = sgn == 0 ? 1.0 : -1.0;
    const QPair as = s * a;          // (sw)^{-1} x
    const QPair ws = s * wq;         // (sw)^{-1}
    QPair p = qpow(as, N);
    double tn = std::pow(t, N);
    for (int n = N; n <= 601; ++n) {
      sum += -1.0 * (p * ws);
      p = p * as;
      tn *= t;
      if (tn / w.norm() < 1e-18 * (1.0 + t)) break;
    }
    *extra_bound += tn / (w.norm() * (1.0 - t));
  }
  // Sign: formula (2) subtracts the series from x^{-1}.
  return sum;
}

QPair eval_chain(const Chain& chain, const QPair& y, const QPair& wq,
                 const QPair& xq, const std::vector<QPair>& hq) {
  auto atom = [&](int code) -> const QPair& {
    if (code == kAtomY) return y;
    if (code == kAtomW) return wq;
    if (code == kAtomX) return xq;
    return hq[static_cast<std::size_t>(code - kAtomH)];
  };
  QPair cur = atom(chain.atoms[0]);
  for (std::size_t i = 1; i < chain.atoms.size(); ++i)
    cur = cur * atom(chain.atoms[i]);
  return chain.coeff * cur;
}

QPair deriv_point(const Task& t, const Paravector& x, const Paravector& w,
                  const Paravector& wi, const std::vector<QPair>& hq) {
  const QPair y = QPair::from_paravector(inverse(x - w));
  const QPair wq = QPair::from_paravector(wi);
  const QPair xq = QPair::from_paravector(x);
  QPair sum{};
  for (const Chain& c : t.chains) sum += eval_chain(c, y, wq, xq, hq);
  return sum;
}

Quat quat_pow4_inv(const Paravector& y) {
  Quat q = quat_para_inv(to_quat(y));
  q = slice_mul(q, q);
  return slice_mul(q, q);
}

}  // namespace

// ---- engine ----------------------------------------------------------------

namespace {

std::vector<EvalResult> run_engine(const Lattice& L, std::vector<Task> tasks,
                                   const SumConfig& cfg0) {
  const int N = L.rank();
  const SumConfig cfg = cfg0.resolved(N);

  for (Task& t : tasks) {
    const double d = L.nearest_point_distance(t.x);
    if (d <= cfg.pole_guard)
      throw NearPoleError("evaluation point within pole guard of a lattice point");
    if (t.kind == Kind::Deriv) {
      t.chains = build_chains(N, static_cast<int>(t.dirs.size()));
      t.prod_h = 1.0;
      for (const auto& h : t.dirs) t.prod_h *= h.norm();
    }
    if (t.kind == Kind::Value && t.form == ZetaTermForm::PowerSeries &&
        t.x.norm() >= L.min_point_norm())
      throw RadiusTooLargeError(
          "power-series form requires |x| < shortest lattice vector");
  }

  // Shells needed: smallest K with every task bound below target_tol.
  const double sigma = L.sigma_min();
  int kmin = 1;
  for (const Task& t : tasks)
    kmin = std::max(kmin,
                    static_cast<int>(std::floor(2.0 * t.x.norm() / sigma)) + 1);
  if (kmin > cfg.max_shells)
    throw RadiusTooLargeError("max_shells too small for this |x|");

  int k_use = kmin;
  double worst_bound_at_max = 0;
  for (const Task& t : tasks) {
    int lo = kmin, hi = cfg.max_shells;
    const double b_max = task_tail_bound(L, t, hi, cfg.pairing);
    if (b_max > cfg.target_tol) {
      worst_bound_at_max = std::max(worst_bound_at_max, b_max);
      k_use = cfg.max_shells;
      continue;
    }
    while (lo < hi) {  // first K with bound <= tol (bound is monotone)
      const int mid = (lo + hi) / 2;
      if (task_tail_bound(L, t, mid, cfg.pairing) <= cfg.target_tol)
        hi = mid;
      else
        lo = mid + 1;
    }
    k_use = std::max(k_use, lo);
  }
  if (worst_bound_at_max > 0 && cfg.error_on_unconverged)
    throw UnconvergedError("tail bound above target_tol at max_shells",
                           worst_bound_at_max, cfg.max_shells);

  const int n_tasks = static_cast<int>(tasks.size());

  // SoA lanes for collapsed-form value tasks; everything else goes through
  // the scalar per-point path.
  std::vector<int> soa_task;  // task index per lane
  for (int i = 0; i < n_tasks; ++i)
    if (tasks[static_cast<std::size_t>(i)].kind == Kind::Value &&
        tasks[static_cast<std::size_t>(i)].form == ZetaTermForm::Collapsed &&
        cfg.pairing)
      soa_task.push_back(i);
  const int lanes = static_cast<int>(soa_task.size());
  std::vector<double> lx0(lanes), lx1(lanes), lx2(lanes), lx3(lanes);
  for (int l = 0; l < lanes; ++l) {
    const Paravector& x = tasks[static_cast<std::size_t>(soa_task[static_cast<std::size_t>(l)])].x;
    lx0[static_cast<std::size_t>(l)] = x.x0;
    lx1[static_cast<std::size_t>(l)] = x.x1;
    lx2[static_cast<std::size_t>(l)] = x.x2;
    lx3[static_cast<std::size_t>(l)] = x.x3;
  }
  const ValueKernel kernel = lanes > 0 ? pick_value_kernel(N, cfg.compensated)
                                       : nullptr;

  std::vector<int> scalar_task;
  for (int i = 0; i < n_tasks; ++i) {
    const Task& t = tasks[static_cast<std::size_t>(i)];
    const bool soa = t.kind == Kind::Value &&
                     t.form == ZetaTermForm::Collapsed && cfg.pairing;
    if (!soa) scalar_task.push_back(i);
  }

  // Per-shell partial sums, filled by workers, reduced in shell order.
  std::vector<std::vector<QPair>> partial(
      static_cast<std::size_t>(k_use) + 1,
      std::vector<QPair>(static_cast<std::size_t>(n_tasks)));
  std::vector<double> extra_bound_per_shell(static_cast<std::size_t>(k_use) + 1,
                                            0.0);

  std::atomic<int> next_shell{1};
  auto work = [&]() {
    std::vector<double> acc(static_cast<std::size_t>(8 * lanes));
    std::vector<double> comp(static_cast<std::size_t>(8 * lanes));
    for (;;) {
      const int k = next_shell.fetch_add(1);
      if (k > k_use) break;
      std::fill(acc.begin(), acc.end(), 0.0);
      std::fill(comp.begin(), comp.end(), 0.0);
      std::vector<Accum> sacc(scalar_task.size());
      double extra = 0;

      for_each_shell_pair(L, k, [&](const std::array<int, 4>&,
                                    const Paravector& w) {
        const Paravector wi = inverse(w);
        if (lanes > 0)
          kernel(w, wi, lx0.data(), lx1.data(), lx2.data(), lx3.data(), lanes,
                 acc.data(), comp.data());
        for (std::size_t si = 0; si < scalar_task.size(); ++si) {
          const Task& t = tasks[static_cast<std::size_t>(scalar_task[si])];
          QPair contrib{};
          switch (t.kind) {
            case Kind::Value: {
              if (t.form == ZetaTermForm::PowerSeries) {
                contrib = power_series_pair(N, cfg.pairing, t.x, w, wi, &extra);
                if (cfg.pairing) {
                  // formula (2): the series is subtracted
                  contrib = -1.0 * contrib;
                }
                break;
              }
              contrib = value_single(N, t.form, t.x, w, wi) +
                        value_single(N, t.form, t.x, -w, -1.0 * wi);
              break;
            }
            case Kind::Deriv: {
              std::vector<QPair> hq;
              hq.reserve(t.dirs.size());
              for (const auto& h : t.dirs)
                hq.push_back(QPair::from_paravector(h));
              contrib = deriv_point(t, t.x, w, wi, hq) +
                        deriv_point(t, t.x, -w, -1.0 * wi, hq);
              break;
            }
            case Kind::PDirect: {
              const Quat y4p = quat_pow4_inv(t.x - w);
              const Quat y4m = quat_pow4_inv(t.x + w);
              Quat w4 = quat_pow4_inv(w);
              Quat s;
              for (int i = 0; i < 4; ++i)
                s[static_cast<std::size_t>(i)] =
                    y4p[static_cast<std::size_t>(i)] +
                    y4m[static_cast<std::size_t>(i)] -
                    2.0 * w4[static_cast<std::size_t>(i)];
              contrib = QPair::from_paravector(to_para(s));
              break;
            }
            case Kind::D0P0: {
              const Quat yp = quat_para_inv(to_quat(t.x - w));
              const Quat ym = quat_para_inv(to_quat(t.x + w));
              const Quat y5p = slice_mul(quat_pow4_inv(t.x - w), yp);
              const Quat y5m = slice_mul(quat_pow4_inv(t.x + w), ym);
              Quat s;
              for (int i = 0; i < 4; ++i)
                s[static_cast<std::size_t>(i)] =
                    -4.0 * (y5p[static_cast<std::size_t>(i)] +
                            y5m[static_cast<std::size_t>(i)]);
              contrib = QPair::from_paravector(to_para(s));
              break;
            }
          }
          sacc[si].add(contrib, cfg.compensated);
        }
      });

      auto& row = partial[static_cast<std::size_t>(k)];
      for (int l = 0; l < lanes; ++l) {
        QPair q;
        const double* a = acc.data() + 8 * l;
        q.p = {a[0], a[1], a[2], a[3]};
        q.m = {a[4], a[5], a[6], a[7]};
        row[static_cast<std::size_t>(soa_task[static_cast<std::size_t>(l)])] = q;
      }
      for (std::size_t si = 0; si < scalar_task.size(); ++si)
        row[static_cast<std::size_t>(scalar_task[si])] = sacc[si].s;
      extra_bound_per_shell[static_cast<std::size_t>(k)] = extra;
    }
  };

  {
    const int nw = std::max(1, cfg.workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < nw; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
  }

  // Deterministic reduction in shell order.
  std::vector<Accum> totals(static_cast<std::size_t>(n_tasks));
  double extra_bound = 0;
  for (int k = 1; k <= k_use; ++k) {
    for (int i = 0; i < n_tasks; ++i)
      totals[static_cast<std::size_t>(i)].add(
          partial[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)],
          cfg.compensated);
    extra_bound += extra_bound_per_shell[static_cast<std::size_t>(k)];
  }

  std::vector<EvalResult> out(static_cast<std::size_t>(n_tasks));
  for (int i = 0; i < n_tasks; ++i) {
    const Task& t = tasks[static_cast<std::size_t>(i)];
    // Leading (w = 0) term.
    Paravector lead;
    switch (t.kind) {
      case Kind::Value:
        lead = inverse(t.x);
        break;
      case Kind::Deriv:
        lead = dir_deriv_inverse(t.x, t.dirs);
        break;
      case Kind::PDirect:
        lead = to_para(quat_pow4_inv(t.x));
        break;
      case Kind::D0P0: {
        const Quat xi = quat_para_inv(to_quat(t.x));
        const Quat x5 = slice_mul(quat_pow4_inv(t.x), xi);
        lead = -4.0 * to_para(x5);
        break;
      }
    }
    const Multivector total =
        totals[static_cast<std::size_t>(i)].s.to_multivector();
    EvalResult r;
    r.value = lead + extract_paravector(total, 1e-9);
    r.shells = k_use;
    r.bound = task_tail_bound(L, t, k_use, cfg.pairing) + extra_bound;
    out[static_cast<std::size_t>(i)] = r;
  }
  return out;
}

}  // namespace

// ---- public API -------------------------------------------------------------

std::vector<EvalResult> zeta_batch(const Lattice& L,
                                   const std::vector<LatticeTask>& reqs,
                                   const SumConfig& cfg, ZetaTermForm form) {
  std::vector<Task> tasks;
  tasks.reserve(reqs.size());
  for (const auto& r : reqs) {
    Task t;
    if (r.dirs.empty()) {
      t.kind = Kind::Value;
      t.form = form;
    } else {
      if (r.dirs.size() > 4)
        throw BadIndexError("zeta derivatives support at most 4 directions");
      t.kind = Kind::Deriv;
    }
    t.x = r.x;
    t.dirs = r.dirs;
    tasks.push_back(std::move(t));
  }
  return run_engine(L, std::move(tasks), cfg);
}

EvalResult zeta_full(const Lattice& L, const Paravector& x,
                     const SumConfig& cfg, ZetaTermForm form) {
  return zeta_batch(L, {{x, {}}}, cfg, form)[0];
}

Paravector zeta(const Lattice& L, const Paravector& x, const SumConfig& cfg,
                ZetaTermForm form) {
  return zeta_full(L, x, cfg, form).value;
}

EvalResult zeta_dir_deriv(const Lattice& L, const Paravector& a,
                          const DirectionList& dirs, const SumConfig& cfg) {
  if (dirs.empty() || dirs.size() > 4)
    throw BadIndexError("zeta_dir_deriv: need 1..4 directions");
  return zeta_batch(L, {{a, dirs}}, cfg)[0];
}

EvalResult Z(const Lattice& L, const Paravector& x, const Paravector& a,
             const SumConfig& cfg) {
  const int N = L.rank();
  std::vector<LatticeTask> reqs;
  reqs.push_back({x + a, {}});
  reqs.push_back({a, {}});
  for (int n = 1; n < N; ++n)
    reqs.push_back({a, DirectionList(static_cast<std::size_t>(n), x)});
  const auto res = zeta_batch(L, reqs, cfg);
  EvalResult out;
  out.value = res[0].value - res[1].value;
  out.bound = res[0].bound + res[1].bound;
  out.shells = res[0].shells;
  double fact = 1;
  for (int n = 1; n < N; ++n) {
    fact *= n;
    out.value = out.value - (1.0 / fact) * res[static_cast<std::size_t>(n) + 1].value;
    out.bound += res[static_cast<std::size_t>(n) + 1].bound / fact;
  }
  return out;
}

namespace {

void check_half_period(const Lattice& L, const Paravector& omega,
                       double pole_guard) {
  if (L.nearest_point_distance(omega) <= pole_guard)
    throw NearPoleError("omega coincides with a lattice point");
  const double scale = L.min_point_norm();
  if (L.nearest_point_distance(2.0 * omega) > 1e-9 * scale)
    throw BadIndexError("omega is not a half-period of the lattice");
}

}  // namespace

EvalResult eta(const Lattice& L, const Paravector& x, const Paravector& omega,
               const SumConfig& cfg) {
  const int N = L.rank();
  const SumConfig rc = cfg.resolved(N);
  check_half_period(L, omega, rc.pole_guard);
  std::vector<LatticeTask> reqs;
  reqs.push_back({omega, {}});
  if (N >= 3) {
    const Paravector u = x + omega;
    reqs.push_back({omega, {u, u}});
  }
  const auto res = zeta_batch(L, reqs, cfg);
  EvalResult out;
  out.value = 2.0 * res[0].value;
  out.bound = 2.0 * res[0].bound;
  out.shells = res[0].shells;
  if (N >= 3) {
    out.value += res[1].value;
    out.bound += res[1].bound;
  }
  return out;
}

EtaEvaluator::EtaEvaluator(const Lattice& L, const Paravector& omega,
                           const SumConfig& cfg)
    : rank_(L.rank()), omega_(omega) {
  const SumConfig rc = cfg.resolved(rank_);
  check_half_period(L, omega, rc.pole_guard);
  std::vector<LatticeTask> reqs;
  reqs.push_back({omega, {}});
  auto axis = [](int i) {
    Paravector p;
    (i == 0 ? p.x0 : i == 1 ? p.x1 : i == 2 ? p.x2 : p.x3) = 1.0;
    return p;
  };
  if (rank_ >= 3)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) reqs.push_back({omega, {axis(i), axis(j)}});
  const auto res = zeta_batch(L, reqs, cfg);
  zeta_omega_ = res[0].value;
  zeta_bound_ = res[0].bound;
  shells_ = res[0].shells;
  if (rank_ >= 3) {
    has_hessian_ = true;
    std::size_t idx = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        hess_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            res[idx].value;
        hess_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            res[idx].value;
        hess_bound_ = std::max(hess_bound_, res[idx].bound);
        ++idx;
      }
  }
}

EvalResult EtaEvaluator::operator()(const Paravector& x) const {
  EvalResult out;
  out.value = 2.0 * zeta_omega_;
  out.bound = 2.0 * zeta_bound_;
  out.shells = shells_;
  if (!has_hessian_) return out;
  const Paravector u = x + omega_;
  const double uc[4] = {u.x0, u.x1, u.x2, u.x3};
  double abs_sum = 0;
  Paravector quad;
  for (int i = 0; i < 4; ++i) {
    abs_sum += std::abs(uc[i]);
    for (int j = 0; j < 4; ++j)
      quad += (uc[i] * uc[j]) *
              hess_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  out.value += quad;
  out.bound += abs_sum * abs_sum * hess_bound_;
  return out;
}

EvalResult p_alpha(const Lattice& L, const MultiIndex& alpha,
                   const Paravector& x, const SumConfig& cfg) {
  if (alpha.degree() != 3)
    throw BadIndexError("p_alpha: |alpha| must be 3");
  if (L.rank() != 4) throw RankError("p_alpha: rank-4 lattice required");
  DirectionList dirs;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < alpha[i]; ++k) {
      Paravector p;
      (i == 0 ? p.x0 : i == 1 ? p.x1 : i == 2 ? p.x2 : p.x3) = 1.0;
      dirs.push_back(p);
    }
  EvalResult r = zeta_dir_deriv(L, x, dirs, cfg);
  r.value = (-1.0 / 6.0) * r.value;
  r.bound /= 6.0;
  return r;
}

EvalResult p_alpha_direct(const Lattice& L, const Paravector& x,
                          const SumConfig& cfg) {
  if (L.rank() != 4)
    throw RankError("p_alpha_direct: rank-4 lattice required");
  Task t;
  t.kind = Kind::PDirect;
  t.x = x;
  return run_engine(L, {t}, cfg)[0];
}

EvalResult d0_p0(const Lattice& L, const Paravector& x, const SumConfig& cfg) {
  if (L.rank() != 4) throw RankError("d0_p0: rank-4 lattice required");
  Task t;
  t.kind = Kind::D0P0;
  t.x = x;
  return run_engine(L, {t}, cfg)[0];
}

std::vector<ZeroCandidate> zero_scan(const Lattice& L, int grid_density,
                                     const SumConfig& cfg) {
  if (L.rank() != 4) throw RankError("zero_scan: rank-4 lattice required");
  if (grid_density < 2 || grid_density > 12)
    throw BadIndexError("zero_scan: grid_density must be in 2..12");
  const int g = grid_density;
  SumConfig sc = cfg.resolved(4);
  sc.error_on_unconverged = false;

  auto cell_point = [&](const std::array<double, 4>& tt) {
    Paravector p;
    for (int j = 0; j < 4; ++j) p += (2.0 * tt[static_cast<std::size_t>(j)]) * L.omega(j);
    return p;
  };

  std::vector<std::array<double, 4>> coords;
  std::vector<Task> tasks;
  for (int i0 = 0; i0 < g; ++i0)
    for (int i1 = 0; i1 < g; ++i1)
      for (int i2 = 0; i2 < g; ++i2)
        for (int i3 = 0; i3 < g; ++i3) {
          const std::array<double, 4> tt = {
              (i0 + 0.5) / g, (i1 + 0.5) / g, (i2 + 0.5) / g, (i3 + 0.5) / g};
          Task t;
          t.kind = Kind::D0P0;
          t.x = cell_point(tt);
          coords.push_back(tt);
          tasks.push_back(std::move(t));
        }
  const auto res = run_engine(L, std::move(tasks), sc);

  // Local minima of |d0_p0| on the torus grid.
  auto at = [&](int a, int b, int c, int d) {
    auto wrap = [&](int v) { return ((v % g) + g) % g; };
    const std::size_t idx = static_cast<std::size_t>(
        ((wrap(a) * g + wrap(b)) * g + wrap(c)) * g + wrap(d));
    return res[idx].value.norm();
  };
  std::vector<std::size_t> seeds;
  for (int i0 = 0; i0 < g; ++i0)
    for (int i1 = 0; i1 < g; ++i1)
      for (int i2 = 0; i2 < g; ++i2)
        for (int i3 = 0; i3 < g; ++i3) {
          const double v = at(i0, i1, i2, i3);
          bool ok = true;
          for (int ax = 0; ax < 4 && ok; ++ax)
            for (int dv = -1; dv <= 1 && ok; dv += 2) {
              int c[4] = {i0, i1, i2, i3};
              c[ax] += dv;
              if (at(c[0], c[1], c[2], c[3]) < v) ok = false;
            }
          if (ok)
            seeds.push_back(static_cast<std::size_t>(
                ((i0 * g + i1) * g + i2) * g + i3));
        }
  // Neighbouring basins can merge on a coarse grid, leaving few strict
  // minima.  Also seed from the smallest grid values; duplicates collapse
  // after refinement.
  {
    std::vector<std::size_t> order(res.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t extra =
        std::min(res.size(), static_cast<std::size_t>(8 * g));
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(extra),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        return res[a].value.norm() < res[b].value.norm();
                      });
    seeds.insert(seeds.end(), order.begin(),
                 order.begin() + static_cast<long>(extra));
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  }

  // Local refinement: shrinking coordinate-descent on the cell torus,
  // confined to a one-cell trust region so distinct basins stay distinct.
  std::vector<ZeroCandidate> out;
  for (std::size_t mi : seeds) {
    const std::array<double, 4> tt0 = coords[mi];
    std::array<double, 4> tt = tt0;
    double best = res[mi].value.norm();
    double best_bound = res[mi].bound;
    double step = 0.5 / g;
    auto eval_at = [&](const std::array<double, 4>& c, double* bound) {
      try {
        const EvalResult r = d0_p0(L, cell_point(c), sc);
        *bound = r.bound;
        return r.value.norm();
      } catch (const NearPoleError&) {
        *bound = 0;
        return std::numeric_limits<double>::infinity();
      }
    };
    for (int it = 0; it < 14; ++it) {
      bool moved = false;
      for (int ax = 0; ax < 4; ++ax) {
        for (int dv = -1; dv <= 1; dv += 2) {
          std::array<double, 4> c = tt;
          c[static_cast<std::size_t>(ax)] += dv * step;
          if (std::abs(c[static_cast<std::size_t>(ax)] -
                       tt0[static_cast<std::size_t>(ax)]) >
              1.0 / g + 1e-12)
            continue;
          double b;
          const double v = eval_at(c, &b);
          if (v < best) {
            best = v;
            best_bound = b;
            tt = c;
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    // Vertex flag: distance (mod lattice) to one of the 15 half-period sums.
    bool vertex = false;
    for (int mask = 1; mask < 16 && !vertex; ++mask) {
      Paravector v;
      for (int j = 0; j < 4; ++j)
        if (mask & (1 << j)) v += L.omega(j);
      if (L.nearest_point_distance(cell_point(tt) - v) <
          0.05 * L.min_point_norm())
        vertex = true;
    }
    out.push_back({cell_point(tt), best, best_bound, vertex});
  }
  std::sort(out.begin(), out.end(),
            [](const ZeroCandidate& a, const ZeroCandidate& b) {
              return a.residual < b.residual;
            });
  // Merge seeds that refined to the same point (mod the lattice), keeping
  // the smallest residual.
  std::vector<ZeroCandidate> unique_out;
  for (const ZeroCandidate& c : out) {
    bool dup = false;
    for (const ZeroCandidate& u : unique_out)
      if (L.nearest_point_distance(c.x - u.x) < 0.02 * L.min_point_norm()) {
        dup = true;
        break;
      }
    if (!dup) unique_out.push_back(c);
  }
  return unique_out;
}

}  // namespace cliff
