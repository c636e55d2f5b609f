#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cliff/calculus.hpp"
#include "cliff/trig.hpp"

using namespace cliff;

namespace {

Paravector random_pv(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng), d(rng), d(rng)};
}

Multivector mv(const Paravector& p) { return p.to_multivector(); }

}  // namespace

TEST_CASE("exp at distinguished points") {
  CHECK((exp_cl({0, 0, 0, 0}) - Paravector{1, 0, 0, 0}).norm() == 0.0);
  // exp(t e1) = cos t + e1 sin t
  const double t = 0.8;
  const Paravector e = exp_cl({0, t, 0, 0});
  CHECK(e.x0 == doctest::Approx(std::cos(t)).epsilon(1e-14));
  CHECK(e.x1 == doctest::Approx(std::sin(t)).epsilon(1e-14));
  // sin(t e1) = e1 sinh t, cos(t e1) = cosh t
  const Paravector s = sin_cl({0, t, 0, 0});
  CHECK(s.x0 == doctest::Approx(0.0));
  CHECK(s.x1 == doctest::Approx(std::sinh(t)).epsilon(1e-14));
  CHECK(cos_cl({0, t, 0, 0}).x0 == doctest::Approx(std::cosh(t)).epsilon(1e-14));
}

TEST_CASE("exp adds exponents along a fixed slice") {
  std::mt19937 rng(3);
  for (int it = 0; it < 20; ++it) {
    const Paravector x = random_pv(rng);
    // x and 2x lie on the same slice, where exp is a homomorphism
    const Multivector lhs = mv(exp_cl(x)) * mv(exp_cl(x));
    const Multivector rhs = mv(exp_cl(2.0 * x));
    CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
    // exp(x) exp(-x) = 1
    const Multivector unit = mv(exp_cl(x)) * mv(exp_cl(-x));
    CHECK((unit - Multivector::scalar(1.0)).norm() <= 1e-13 * unit.norm());
  }
}

TEST_CASE("Pythagorean identity on slices") {
  std::mt19937 rng(7);
  for (int it = 0; it < 20; ++it) {
    const Paravector x = random_pv(rng, 1.5);
    const Multivector s = mv(sin_cl(x)), c = mv(cos_cl(x));
    const Multivector sum = s * s + c * c;
    CHECK((sum - Multivector::scalar(1.0)).norm() <= 1e-12 * (1.0 + sum.norm()));
  }
}

TEST_CASE("Euler relation: exp(x) = cos(vec part of ix)... via slice lift") {
  // sin and cos reduce to the classical functions on the real axis
  for (double t : {-1.2, -0.3, 0.4, 1.7}) {
    CHECK(sin_cl({t, 0, 0, 0}).x0 == doctest::Approx(std::sin(t)).epsilon(1e-14));
    CHECK(cos_cl({t, 0, 0, 0}).x0 == doctest::Approx(std::cos(t)).epsilon(1e-14));
    CHECK(exp_cl({t, 0, 0, 0}).x0 == doctest::Approx(std::exp(t)).epsilon(1e-14));
  }
}

TEST_CASE("cotan matches classical cot on the real axis") {
  for (double t : {0.2, 0.5, 1.0, 1.4, 2.8, -0.7}) {
    const Paravector c = cotan_cl({t, 0, 0, 0});
    CHECK(std::abs(c.x0 - 1.0 / std::tan(t)) <= 1e-10 * (1.0 + std::abs(c.x0)));
    CHECK(std::abs(c.x1) + std::abs(c.x2) + std::abs(c.x3) <= 1e-14);
  }
}

TEST_CASE("cotan throws at the zeros of sin") {
  CHECK_THROWS_AS(cotan_cl({0, 0, 0, 0}), PoleOfCotanError);
  CHECK_THROWS_AS(cotan_cl({M_PI, 1e-14, 0, 0}), PoleOfCotanError);
}

TEST_CASE("cotan times sin recovers cos") {
  std::mt19937 rng(11);
  for (int it = 0; it < 20; ++it) {
    const Paravector x = random_pv(rng);
    Paravector s;
    try {
      s = sin_cl(x);
      const Paravector ct = cotan_cl(x);
      const Multivector lhs = mv(ct) * mv(s);
      CHECK((lhs - mv(cos_cl(x))).norm() <= 1e-11 * (1.0 + lhs.norm()));
    } catch (const PoleOfCotanError&) {
      continue;
    }
  }
}

TEST_CASE("trig functions agree with their planar lifts") {
  const auto us = [](double a, double b) { return std::sin(a) * std::cosh(b); };
  const auto vs = [](double a, double b) { return std::cos(a) * std::sinh(b); };
  std::mt19937 rng(13);
  for (int it = 0; it < 20; ++it) {
    const Paravector x = random_pv(rng);
    CHECK((sin_cl(x) - axial_lift(us, vs, x)).norm() <= 1e-13);
  }
}

TEST_CASE("stable evaluation near the axis") {
  // tiny vector part: series branch must agree smoothly with the direct one
  const Paravector a = sin_cl({0.5, 1e-9, 0, 0});
  const Paravector b = sin_cl({0.5, 1e-3, 0, 0});
  CHECK(a.x0 == doctest::Approx(std::sin(0.5)).epsilon(1e-12));
  CHECK(a.x1 / 1e-9 == doctest::Approx(b.x1 / 1e-3).epsilon(1e-5));
  CHECK(std::isfinite(sin_cl({0.5, 0, 0, 0}).x0));
}
