#include "cliff/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cliff {

namespace {

// Eigenvalues of a symmetric n x n matrix (n <= 4) by cyclic Jacobi.
std::array<double, 4> jacobi_eigenvalues(std::array<std::array<double, 4>, 4> a,
                                         int n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  return {a[0][0], a[1][1], a[2][2], a[3][3]};
}

std::array<double, 4> to_vec(const Paravector& p) {
  return {p.x0, p.x1, p.x2, p.x3};
}

}  // namespace

Lattice::Lattice(int rank, const std::vector<Paravector>& half_periods)
    : rank_(rank) {
  if (rank < 1 || rank > 4)
    throw RankError("lattice rank must be in 1..4");
  if (static_cast<int>(half_periods.size()) != rank)
    throw RankError("expected exactly rank half-periods");
  double max_norm = 0;
  for (int j = 0; j < rank; ++j) {
    omega_[static_cast<std::size_t>(j)] = half_periods[static_cast<std::size_t>(j)];
    max_norm = std::max(max_norm, half_periods[static_cast<std::size_t>(j)].norm());
  }
  if (max_norm == 0) throw RankError("zero half-period");

  // Gram matrix of the doubled periods.
  std::array<std::array<double, 4>, 4> g{};
  for (int i = 0; i < rank; ++i) {
    const auto pi = to_vec(2.0 * omega_[static_cast<std::size_t>(i)]);
    for (int j = 0; j < rank; ++j) {
      const auto pj = to_vec(2.0 * omega_[static_cast<std::size_t>(j)]);
      double s = 0;
      for (int c = 0; c < 4; ++c) s += pi[static_cast<std::size_t>(c)] * pj[static_cast<std::size_t>(c)];
      g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
    }
  }
  const auto eig = jacobi_eigenvalues(g, rank);
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j < rank; ++j) lo = std::min(lo, eig[static_cast<std::size_t>(j)]);
  sigma_min_ = std::sqrt(std::max(lo, 0.0));
  if (sigma_min_ <= 1e-10 * 2.0 * max_norm)
    throw RankError("half-periods are (nearly) linearly dependent");

  // Inverse of the rank x rank Gram block by Gauss-Jordan.
  std::array<std::array<double, 8>, 4> aug{};
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) aug[i][j] = g[i][j];
    aug[i][rank + i] = 1.0;
  }
  for (int col = 0; col < rank; ++col) {
    int piv = col;
    for (int r = col + 1; r < rank; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
    std::swap(aug[piv], aug[static_cast<std::size_t>(col)]);
    const double inv = 1.0 / aug[col][col];
    for (int c = 0; c < 2 * rank; ++c) aug[col][c] *= inv;
    for (int r = 0; r < rank; ++r) {
      if (r == col) continue;
      const double f = aug[r][col];
      for (int c = 0; c < 2 * rank; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) gram_inv_[i][j] = aug[i][rank + j];

  min_point_norm_ = std::numeric_limits<double>::infinity();
  for (const auto& sp : shell_points(*this, 1))
    min_point_norm_ = std::min(min_point_norm_, sp.w.norm());
}

Paravector Lattice::point(const std::array<int, 4>& k) const {
  Paravector p;
  for (int j = 0; j < rank_; ++j)
    p += (2.0 * k[static_cast<std::size_t>(j)]) * omega_[static_cast<std::size_t>(j)];
  return p;
}

double Lattice::nearest_point_distance(const Paravector& x) const {
  // Continuous least-squares coordinates, then search the rounded cube.
  std::array<double, 4> b{};
  const auto xv = to_vec(x);
  for (int j = 0; j < rank_; ++j) {
    const auto pj = to_vec(2.0 * omega_[static_cast<std::size_t>(j)]);
    double s = 0;
    for (int c = 0; c < 4; ++c) s += pj[static_cast<std::size_t>(c)] * xv[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(j)] = s;
  }
  std::array<double, 4> coef{};
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) coef[i] += gram_inv_[i][j] * b[j];

  std::array<int, 4> base{};
  for (int j = 0; j < rank_; ++j)
    base[static_cast<std::size_t>(j)] = static_cast<int>(std::lround(coef[static_cast<std::size_t>(j)]));

  double best = std::numeric_limits<double>::infinity();
  const int combos = 1;
  (void)combos;
  std::array<int, 4> off{};
  const int total = 1 << (2 * rank_);  // base-ish enumeration of {-1,0,1}^rank
  for (int code = 0; code < total; ++code) {
    int c = code;
    bool ok = true;
    for (int j = 0; j < rank_; ++j) {
      const int d = c & 3;
      c >>= 2;
      if (d == 3) {
        ok = false;
        break;
      }
      off[static_cast<std::size_t>(j)] = d - 1;
    }
    if (!ok) continue;
    std::array<int, 4> k{};
    for (int j = 0; j < rank_; ++j) k[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(j)] + off[static_cast<std::size_t>(j)];
    best = std::min(best, (x - point(k)).norm());
  }
  return best;
}

SumConfig SumConfig::resolved(int rank) const {
  SumConfig c = *this;
  if (c.max_shells <= 0) c.max_shells = rank <= 2 ? 200 : (rank == 3 ? 100 : 60);
  if (c.target_tol <= 0) c.target_tol = rank <= 2 ? 1e-6 : 1e-4;
  if (c.workers < 1) c.workers = 1;
  return c;
}

long long shell_count(int rank, int k) {
  auto ipow = [](long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  return ipow(2 * k + 1, rank) - ipow(2 * k - 1, rank);
}

void for_each_shell_pair(
    const Lattice& L, int k,
    const std::function<void(const std::array<int, 4>&, const Paravector&)>&
        fn) {
  if (k < 1) throw BadIndexError("shell index must be >= 1");
  const int n = L.rank();
  std::array<int, 4> m{};
  // Face decomposition: j is the first coordinate with |m_j| = k; earlier
  // coordinates range in [-(k-1), k-1], later ones in [-k, k].
  for (int j = 0; j < n; ++j) {
    std::array<int, 4> lo{}, hi{};
    for (int i = 0; i < n; ++i) {
      if (i < j) {
        lo[static_cast<std::size_t>(i)] = -(k - 1);
        hi[static_cast<std::size_t>(i)] = k - 1;
      } else if (i > j) {
        lo[static_cast<std::size_t>(i)] = -k;
        hi[static_cast<std::size_t>(i)] = k;
      }
    }
    for (int sj = -k; sj <= k; sj += 2 * k) {
      m[static_cast<std::size_t>(j)] = sj;
      std::array<int, 4> cur = lo;
      while (true) {
        for (int i = 0; i < n; ++i)
          if (i != j) m[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i)];
        // Keep only the representative of each (m, -m) pair.
        for (int i = 0; i < n; ++i) {
          const int v = m[static_cast<std::size_t>(i)];
          if (v > 0) {
            fn(m, L.point(m));
            break;
          }
          if (v < 0) break;
        }
        int i = 0;
        for (; i < n; ++i) {
          if (i == j) continue;
          if (cur[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]) {
            ++cur[static_cast<std::size_t>(i)];
            break;
          }
          cur[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
        }
        if (i == n) break;
      }
      if (k == 0) break;
    }
  }
}

std::vector<ShellPoint> shell_points(const Lattice& L, int k) {
  std::vector<ShellPoint> out;
  out.reserve(static_cast<std::size_t>(shell_count(L.rank(), k)));
  for_each_shell_pair(L, k, [&](const std::array<int, 4>& m, const Paravector& w) {
    out.push_back({m, w});
    std::array<int, 4> neg{};
    for (int i = 0; i < 4; ++i) neg[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)];
    out.push_back({neg, -w});
  });
  return out;
}

namespace {

double falling(int n, int j) {
  double r = 1;
  for (int i = 0; i < j; ++i) r *= n - i;
  return r;
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// m-th derivative of 1/(1-t) (unpaired) or of 1/(1-t^2) (paired), both with
// nonnegative power-series coefficients.
double generator_deriv(int m, double t, bool paired) {
  if (!paired) return factorial(m) * std::pow(1.0 - t, -m - 1);
  return 0.5 * factorial(m) *
         (std::pow(1.0 - t, -m - 1) +
          (m % 2 == 0 ? 1.0 : -1.0) * std::pow(1.0 + t, -m - 1));
}

// G(t) = d^q/dt^q [ t^Neff * gen(t) ]: majorant of sum_n n!/(n-q)! t^{n-q}
// over the surviving monomial degrees n.
double deriv_majorant(int neff, int q, double t, bool paired) {
  double s = 0;
  for (int j = 0; j <= std::min(q, neff); ++j) {
    const double tp = (neff == j) ? 1.0 : std::pow(t, neff - j);
    s += binom(q, j) * falling(neff, j) * tp *
         generator_deriv(q - j, t, paired);
  }
  return s;
}

}  // namespace

double tail_bound_deriv(const Lattice& L, int N, double r, int K, int q,
                        double prod_h, bool paired) {
  if (N < 1 || N > 4) throw BadIndexError("tail_bound: N must be 1..4");
  if (K < 1) throw BadIndexError("tail_bound: K must be >= 1");
  if (q < 0) throw BadIndexError("tail_bound: q must be >= 0");
  const int rank = L.rank();
  const double sigma = L.sigma_min();
  if (2.0 * r >= sigma * (K + 1))
    throw RadiusTooLargeError(
        "tail_bound: |x| <= r reaches into the first discarded shell");
  const int neff = paired && N % 2 == 0 ? N + 1 : N;
  const int e = std::max(neff - q, 0);
  const int p_exp = q + 2 + e - rank;  // remainder decay k^{-p_exp}
  if (p_exp <= 1)
    throw RankError("tail_bound: series order too low for this lattice rank");

  const int M = K + 4096;
  double sum = 0;
  for (int k = K + 1; k <= M; ++k) {
    const double d = sigma * k;
    const double t = r / d;
    sum += static_cast<double>(shell_count(rank, k)) * prod_h *
           std::pow(d, -q - 1) * deriv_majorant(neff, q, t, paired);
  }
  // Integral-comparison closeout beyond M, using G(t) <= G(t_M)*(t/t_M)^e
  // and shell_count(k) <= 2*rank*(3k)^(rank-1).
  const double tM = r / (sigma * M);
  double cM;
  if (tM > 0)
    cM = deriv_majorant(neff, q, tM, paired) / std::pow(tM, e);
  else
    cM = deriv_majorant(neff, q, 0.0, paired);  // nonzero only when q >= neff
  const double A = 2.0 * rank * std::pow(3.0, rank - 1) * prod_h * cM *
                   std::pow(r, e) * std::pow(sigma, -(q + 1 + e));
  sum += A * std::pow(static_cast<double>(M), 1 - p_exp) / (p_exp - 1);
  return sum;
}

double tail_bound(const Lattice& L, int N, double r, int K, bool paired) {
  return tail_bound_deriv(L, N, r, K, 0, 1.0, paired);
}

}  // namespace cliff
