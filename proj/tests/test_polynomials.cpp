#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "cliff/calculus.hpp"
#include "cliff/polynomials.hpp"

using namespace cliff;

namespace {

Paravector random_pv(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng), d(rng), d(rng)};
}

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All multi-indices of degree k.
std::vector<MultiIndex> indices_of_degree(int k) {
  std::vector<MultiIndex> out;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b)
      for (int c = 0; a + b + c <= k; ++c)
        out.push_back({a, b, c, k - a - b - c});
  return out;
}

}  // namespace

TEST_CASE("multiset permutation counts are multinomials") {
  CHECK(multiset_permutations({2, 1, 0, 0}).size() == 3);
  CHECK(multiset_permutations({1, 1, 1, 0}).size() == 6);
  CHECK(multiset_permutations({3, 0, 0, 0}).size() == 1);
  for (int k = 1; k <= 4; ++k)
    for (const MultiIndex& a : indices_of_degree(k))
      CHECK(multiset_permutations(a).size() ==
            static_cast<std::size_t>(a.multinomial()));
  CHECK_THROWS_AS(multiset_permutations({0, 0, 0, 0}), EmptyIndexError);
  CHECK_THROWS_AS(multiset_permutations({-1, 1, 0, 0}), BadIndexError);
}

TEST_CASE("degree-k basis has C(k+3,3) elements") {
  for (int k = 1; k <= 6; ++k)
    CHECK(indices_of_degree(k).size() ==
          static_cast<std::size_t>(binom(k + 3, 3)));
}

TEST_CASE("degree-1 polynomials are the basis paravectors") {
  const Paravector x{0.3, -0.2, 0.7, 0.1};
  CHECK((eval_P({1, 0, 0, 0}, x) - Paravector{1, 0, 0, 0}).norm() == 0.0);
  const Paravector p1 = eval_P({0, 1, 0, 0}, x);
  CHECK((p1 - Paravector{0, 1, 0, 0}).norm() == 0.0);
}

TEST_CASE("eval_P is homogeneous of degree |alpha| - 1 in x") {
  std::mt19937 rng(17);
  for (int it = 0; it < 20; ++it) {
    const Paravector x = random_pv(rng);
    const double t = 1.7;
    for (const MultiIndex& a : indices_of_degree(3)) {
      const Paravector p = eval_P(a, x);
      const Paravector pt = eval_P(a, t * x);
      CHECK((pt - (t * t) * p).norm() <= 1e-12 * (1.0 + pt.norm()));
    }
  }
}

TEST_CASE("eval_S matches the directional derivatives of the inverse") {
  // (h_1|grad)...(h_q|grad) x^{-1} with h's along axes, repeated per beta,
  // equals (-1)^q (prod beta_i!) S_beta(x).
  std::mt19937 rng(23);
  auto axis = [](int i) {
    Paravector p;
    (i == 0 ? p.x0 : i == 1 ? p.x1 : i == 2 ? p.x2 : p.x3) = 1.0;
    return p;
  };
  for (int it = 0; it < 10; ++it) {
    Paravector x = random_pv(rng);
    if (x.norm() < 0.3) x.x0 += 1.0;
    for (int k = 1; k <= 3; ++k)
      for (const MultiIndex& b : indices_of_degree(k)) {
        DirectionList dirs;
        for (int i = 0; i < 4; ++i)
          for (int rep = 0; rep < b[i]; ++rep) dirs.push_back(axis(i));
        const Paravector d = dir_deriv_inverse(x, dirs);
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        const Paravector s = eval_S(b, x);
        const Paravector expect = (sign * b.factorial_prod()) * s;
        CHECK((d - expect).norm() <= 1e-10 * (1.0 + d.norm()));
      }
  }
}

TEST_CASE("S_0 is not defined but S_(delta_i) has the x^-1 e_i x^-1 form") {
  const Paravector x{1.0, 0.5, -0.25, 0.0};
  const Paravector xi = inverse(x);
  const Paravector s = eval_S({1, 0, 0, 0}, x);
  // S_{(1,0,0,0)}(x) = x^{-1} * 1 * x^{-1}
  const Multivector expect = xi.to_multivector() * xi.to_multivector();
  CHECK((s.to_multivector() - expect).norm() <= 1e-13);
}

TEST_CASE("generating function closed form vs partial sums") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int it = 0; it < 20; ++it) {
    Paravector x = random_pv(rng, 0.5);
    std::array<double, 4> lam{d(rng), d(rng), d(rng), d(rng)};
    double l1 = std::abs(lam[0]) + std::abs(lam[1]) + std::abs(lam[2]) +
                std::abs(lam[3]);
    const double rho = l1 * x.norm();
    if (rho > 0.3) {
      const double s = 0.3 / rho;
      for (auto& v : lam) v *= s;
    }
    const auto [closed, partial] = generating_check(lam, x, 12);
    CHECK((closed - partial).norm() <= 1e-5);
  }
}

TEST_CASE("partial sums of the generating series rebuild eval_P") {
  // Cross-check the fast level recursion against direct eval_P term sums.
  std::mt19937 rng(37);
  const Paravector x = random_pv(rng, 0.4);
  const std::array<double, 4> lam{0.3, -0.2, 0.25, 0.15};
  const auto [closed, partial] = generating_check(lam, x, 5);
  Paravector direct;
  for (int k = 1; k <= 5; ++k)
    for (const MultiIndex& a : indices_of_degree(k)) {
      double coeff = 1.0;
      for (int i = 0; i < 4; ++i)
        for (int rep = 0; rep < a[i]; ++rep) coeff *= lam[static_cast<std::size_t>(i)];
      direct += coeff * eval_P(a, x);
    }
  CHECK((partial - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
  (void)closed;
}
