#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cliff/oracles.hpp"

using namespace cliff::oracles;

TEST_CASE("cot partial fractions converge to classical cot") {
  for (double t : {0.25, 0.9, 1.4, -0.6}) {
    const double exact = 1.0 / std::tan(t);
    const double a = classical_cot_partial_fractions(t, 2000);
    const double b = classical_cot_partial_fractions(t, 4000);
    CHECK(std::abs(b - exact) < std::abs(a - exact) + 1e-15);
    CHECK(std::abs(b - exact) <= 1e-3);
  }
}

TEST_CASE("classical zeta is odd") {
  const std::complex<double> w1{1.1, 0.0}, w2{0.2, 0.9};
  const std::complex<double> z{0.31, 0.4};
  const auto a = classical_weierstrass_zeta(z, w1, w2, 400);
  const auto b = classical_weierstrass_zeta(-z, w1, w2, 400);
  CHECK(std::abs(a + b) <= 1e-12 * (1.0 + std::abs(a)));
}

TEST_CASE("classical zeta quasi-periodicity") {
  // zeta(z + 2 w1) - zeta(z) = 2 zeta(w1)
  const std::complex<double> w1{1.1, 0.0}, w2{0.2, 0.9};
  const std::complex<double> z{0.31, 0.4};
  const int K = 3000;
  const auto a = classical_weierstrass_zeta(z + 2.0 * w1, w1, w2, K);
  const auto b = classical_weierstrass_zeta(z, w1, w2, K);
  const auto c = classical_weierstrass_zeta(w1, w1, w2, K);
  CHECK(std::abs(a - b - 2.0 * c) <= 1e-5);
}

TEST_CASE("simple pole with residue one at the origin") {
  const std::complex<double> w1{1.0, 0.0}, w2{0.0, 1.0};
  const std::complex<double> eps{1e-6, 0.0};
  const auto v = classical_weierstrass_zeta(eps, w1, w2, 200);
  CHECK(std::abs(v * eps - 1.0) <= 1e-9);
}
