#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cliff/lattice.hpp"

using namespace cliff;

namespace {

Lattice rank2() { return Lattice(2, {{1.0, 0, 0, 0}, {0.15, 1.05, 0, 0}}); }

Lattice rank4() {
  return Lattice(4, {{1.0, 0, 0, 0},
                     {0.1, 1.1, 0, 0},
                     {0, 0.2, 0.95, 0},
                     {0.05, 0, 0.1, 1.05}});
}

}  // namespace

TEST_CASE("lattice construction validates its periods") {
  CHECK_THROWS_AS(Lattice(0, {}), RankError);
  CHECK_THROWS_AS(Lattice(2, {{1, 0, 0, 0}}), RankError);
  CHECK_THROWS_AS(Lattice(1, {{0, 0, 0, 0}}), RankError);
  // linearly dependent periods
  CHECK_THROWS_AS(Lattice(2, {{1, 0, 0, 0}, {2, 0, 0, 0}}), RankError);
  CHECK_NOTHROW(rank4());
}

TEST_CASE("shell point counts") {
  // rank 1, k=3: exactly the two points +-6 omega
  Lattice L1(1, {{0.5, 0, 0, 0}});
  const auto pts = shell_points(L1, 3);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].w.x0 == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(pts[1].w.x0 == doctest::Approx(-3.0).epsilon(1e-15));
  // rank 4, k=1: 3^4 - 1 = 80 points
  CHECK(shell_points(rank4(), 1).size() == 80);
  for (int k = 1; k <= 4; ++k) {
    CHECK(shell_count(4, k) ==
          static_cast<long>(std::pow(2 * k + 1, 4) - std::pow(2 * k - 1, 4)));
    CHECK(shell_points(rank4(), k).size() ==
          static_cast<std::size_t>(shell_count(4, k)));
  }
}

TEST_CASE("shells partition the brute-force index box") {
  const Lattice L = rank2();
  std::set<std::array<int, 4>> seen;
  for (int k = 1; k <= 3; ++k)
    for (const auto& p : shell_points(L, k)) {
      CHECK(std::max({std::abs(p.index[0]), std::abs(p.index[1]),
                      std::abs(p.index[2]), std::abs(p.index[3])}) == k);
      CHECK(p.index[2] == 0);
      CHECK(p.index[3] == 0);
      CHECK(seen.insert(p.index).second);  // no duplicates
    }
  CHECK(seen.size() == 7 * 7 - 1);  // every index in the box except 0
}

TEST_CASE("every shell point is emitted adjacent to its mate") {
  const Lattice L = rank4();
  const auto pts = shell_points(L, 2);
  REQUIRE(pts.size() % 2 == 0);
  for (std::size_t i = 0; i < pts.size(); i += 2) {
    for (int j = 0; j < 4; ++j)
      CHECK(pts[i].index[j] == -pts[i + 1].index[j]);
    CHECK((pts[i].w + pts[i + 1].w).norm() == 0.0);
  }
}

TEST_CASE("for_each_shell_pair emits one representative per pair") {
  const Lattice L = rank4();
  for (int k = 1; k <= 3; ++k) {
    std::set<std::array<int, 4>> reps;
    for_each_shell_pair(L, k, [&](const std::array<int, 4>& m, const Paravector& w) {
      CHECK(reps.insert(m).second);
      // representative has positive leading nonzero coordinate
      for (int j = 0; j < 4; ++j) {
        if (m[j] != 0) {
          CHECK(m[j] > 0);
          break;
        }
      }
      CHECK((w - L.point(m)).norm() == 0.0);
    });
    CHECK(reps.size() == static_cast<std::size_t>(shell_count(4, k) / 2));
  }
}

TEST_CASE("lattice points and nearest distances") {
  const Lattice L = rank2();
  const Paravector w = L.point({1, -2, 0, 0});
  CHECK(w.x0 == doctest::Approx(2.0 - 0.6).epsilon(1e-15));
  CHECK(w.x1 == doctest::Approx(-4.2).epsilon(1e-15));
  // at a lattice point the distance is zero
  CHECK(L.nearest_point_distance(w) <= 1e-12);
  // slightly off, it is the offset
  CHECK(L.nearest_point_distance(w + Paravector{1e-3, 0, 0, 0}) ==
        doctest::Approx(1e-3).epsilon(1e-9));
  // far off-plane components count too
  CHECK(L.nearest_point_distance({0, 0, 0.7, 0}) ==
        doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("sigma_min certifies the doubled-period geometry") {
  Lattice Lo(2, {{1.0, 0, 0, 0}, {0, 1.0, 0, 0}});
  CHECK(Lo.sigma_min() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(Lo.min_point_norm() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tail bound decreases in K and dominates the brute-force tail") {
  const Lattice L = rank2();
  double prev = tail_bound(L, 2, 0.4, 10, true);
  for (int K : {20, 40, 80, 160}) {
    const double b = tail_bound(L, 2, 0.4, K, true);
    CHECK(b < prev);
    prev = b;
  }
  // brute-force remainder of the scalar majorant series vs the bound:
  // sum over shells K+1..K' of per-point |w|^{-N-1} r^N / (1 - r/|w|) is
  // itself below tail_bound with pairing disabled.
  const int K = 15;
  const double r = 0.4;
  double brute = 0;
  for (int k = K + 1; k <= K + 400; ++k)
    for (const auto& p : shell_points(L, k)) {
      const double d = p.w.norm();
      brute += std::pow(r / d, 2) / (d - r);
    }
  CHECK(brute <= tail_bound(L, 2, r, K, false));
}

TEST_CASE("tail bound input validation") {
  const Lattice L = rank2();
  CHECK_THROWS_AS(tail_bound(L, 2, 100.0, 10, true), RadiusTooLargeError);
  CHECK_THROWS_AS(tail_bound(L, 5, 0.3, 10, true), BadIndexError);
  CHECK_THROWS_AS(tail_bound_deriv(L, 2, 0.3, 0, 1, 1.0, true), BadIndexError);
}

TEST_CASE("derivative tail bound grows with order and direction norms") {
  const Lattice L = rank4();
  const double b0 = tail_bound(L, 4, 0.3, 12, true);
  const double b1 = tail_bound_deriv(L, 4, 0.3, 12, 1, 1.0, true);
  const double b2 = tail_bound_deriv(L, 4, 0.3, 12, 2, 1.0, true);
  CHECK(b0 < b1);
  CHECK(b1 < b2);
  CHECK(tail_bound_deriv(L, 4, 0.3, 12, 2, 3.0, true) ==
        doctest::Approx(3.0 * b2).epsilon(1e-12));
}

TEST_CASE("SumConfig resolves rank-dependent defaults") {
  SumConfig c;
  const SumConfig r2 = c.resolved(2);
  CHECK(r2.max_shells == 200);
  CHECK(r2.target_tol == doctest::Approx(1e-6));
  const SumConfig r4 = c.resolved(4);
  CHECK(r4.max_shells == 60);
  CHECK(r4.target_tol == doctest::Approx(1e-4));
  SumConfig custom;
  custom.max_shells = 33;
  custom.target_tol = 1e-3;
  const SumConfig rc = custom.resolved(4);
  CHECK(rc.max_shells == 33);
  CHECK(rc.target_tol == doctest::Approx(1e-3));
}
