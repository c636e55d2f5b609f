#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliff/detail/qpair.hpp"
#include "cliff/multivector.hpp"
#include "cliff/paravector.hpp"

using namespace cliff;

namespace {

// Independent blade-product oracle: represent each blade as a sorted list of
// generators, concatenate, then bubble-sort to canonical order counting swaps
// (each swap = one anticommutation = factor -1) and remove adjacent equal
// generators (each e_i e_i = -1).
void oracle_product(int a, int b, int& sign, int& blade) {
  static const int gens[8][4] = {{0, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 0, 0},
                                 {1, 3, 0, 0}, {2, 1, 2, 0}, {2, 1, 3, 0},
                                 {2, 2, 3, 0}, {3, 1, 2, 3}};
  int seq[8], n = 0;
  for (int i = 1; i <= gens[a][0]; ++i) seq[n++] = gens[a][i];
  for (int i = 1; i <= gens[b][0]; ++i) seq[n++] = gens[b][i];
  sign = 1;
  // bubble sort with swap counting
  for (bool moved = true; moved;) {
    moved = false;
    for (int i = 0; i + 1 < n; ++i)
      if (seq[i] > seq[i + 1]) {
        std::swap(seq[i], seq[i + 1]);
        sign = -sign;
        moved = true;
      }
  }
  // cancel adjacent duplicates: e_i e_i = -1
  int out[8], m = 0;
  for (int i = 0; i < n;) {
    if (i + 1 < n && seq[i] == seq[i + 1]) {
      sign = -sign;
      i += 2;
    } else {
      out[m++] = seq[i++];
    }
  }
  blade = 0;
  if (m == 0) blade = 0;
  else if (m == 1) blade = out[0];                       // e1,e2,e3 -> 1,2,3
  else if (m == 2) blade = out[0] + out[1] + 1;          // e12->4 e13->5 e23->6
  else blade = 7;
}

Multivector random_mv(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Multivector m;
  for (auto& c : m.c) c = d(rng);
  return m;
}

Paravector random_pv(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return {d(rng), d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("geometric product matches the blade oracle on all 64 pairs") {
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      Multivector ma, mb;
      ma.c[static_cast<std::size_t>(a)] = 1.0;
      mb.c[static_cast<std::size_t>(b)] = 1.0;
      const Multivector p = ma * mb;
      int sign, blade;
      oracle_product(a, b, sign, blade);
      for (int i = 0; i < 8; ++i)
        CHECK(p.c[static_cast<std::size_t>(i)] ==
              (i == blade ? double(sign) : 0.0));
    }
}

TEST_CASE("generator relations") {
  const Multivector e1 = Multivector::basis(1), e2 = Multivector::basis(2),
                    e3 = Multivector::basis(3);
  CHECK((e1 * e1).c[0] == -1.0);
  CHECK((e2 * e2).c[0] == -1.0);
  CHECK((e3 * e3).c[0] == -1.0);
  const Multivector anti = e1 * e2 + e2 * e1;
  for (double c : anti.c) CHECK(c == 0.0);
  // omega = e123 squares to +1 and is central
  const Multivector om = Multivector::basis(7);
  CHECK((om * om).c[0] == 1.0);
  const Multivector comm = om * e1 - e1 * om;
  for (double c : comm.c) CHECK(c == 0.0);
}

TEST_CASE("associativity and distributivity on random triples") {
  std::mt19937 rng(42);
  for (int it = 0; it < 200; ++it) {
    const Multivector a = random_mv(rng), b = random_mv(rng),
                      c = random_mv(rng);
    const Multivector lhs = (a * b) * c, rhs = a * (b * c);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    const Multivector d1 = a * (b + c), d2 = a * b + a * c;
    CHECK((d1 - d2).norm() <= 1e-12 * (1.0 + d1.norm()));
  }
}

TEST_CASE("quaternion pair split is an algebra isomorphism") {
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    const Multivector a = random_mv(rng), b = random_mv(rng);
    // roundtrip
    const Multivector r = detail::QPair::from_multivector(a).to_multivector();
    CHECK((r - a).norm() <= 1e-14 * (1.0 + a.norm()));
    // product homomorphism
    const auto qa = detail::QPair::from_multivector(a);
    const auto qb = detail::QPair::from_multivector(b);
    const Multivector viaq = (qa * qb).to_multivector();
    CHECK((viaq - a * b).norm() <= 1e-12 * (1.0 + viaq.norm()));
  }
}

TEST_CASE("paravector inverse and conjugation") {
  std::mt19937 rng(3);
  for (int it = 0; it < 100; ++it) {
    Paravector x = random_pv(rng);
    if (x.norm() < 0.1) continue;
    const Paravector xi = inverse(x);
    const Multivector prod = x.to_multivector() * xi.to_multivector();
    CHECK(std::abs(prod.c[0] - 1.0) <= 1e-12);
    for (int i = 1; i < 8; ++i)
      CHECK(std::abs(prod.c[static_cast<std::size_t>(i)]) <= 1e-12);
    // x x* = |x|^2
    const Multivector nn =
        x.to_multivector() * x.conjugate().to_multivector();
    CHECK(nn.c[0] == doctest::Approx(x.norm_sq()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(inverse(Paravector{}), ZeroNormError);
}

TEST_CASE("sandwich powers stay in S+V") {
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    const Paravector h = random_pv(rng), x = random_pv(rng);
    for (int n = 0; n <= 5; ++n) {
      const Paravector s = sandwich_power(h, x, n);
      // recompute in full algebra and compare
      Multivector m = h.to_multivector();
      for (int k = 0; k < n; ++k)
        m = m * x.to_multivector() * h.to_multivector();
      CHECK(m.grade23_residue() <= 1e-12 * (1.0 + m.norm()));
      CHECK((m - s.to_multivector()).norm() <= 1e-11 * (1.0 + m.norm()));
    }
  }
}

TEST_CASE("extract_paravector rejects leaking elements") {
  Multivector m = Multivector::basis(4);  // pure bivector
  CHECK_THROWS_AS(extract_paravector(m), GradeLeakError);
}

TEST_CASE("norm is multiplicative on paravector chains") {
  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    const Paravector a = random_pv(rng), b = random_pv(rng),
                     c = random_pv(rng);
    const Multivector p =
        a.to_multivector() * b.to_multivector() * c.to_multivector();
    CHECK(p.norm() ==
          doctest::Approx(a.norm() * b.norm() * c.norm()).epsilon(1e-12));
  }
}
