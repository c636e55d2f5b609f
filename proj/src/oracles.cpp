#include "cliff/oracles.hpp"

#include <cmath>
#include <cstdlib>

namespace cliff::oracles {

std::complex<double> classical_weierstrass_zeta(std::complex<double> z,
                                                std::complex<double> w1,
                                                std::complex<double> w2,
                                                int K) {
  const std::complex<double> p1 = 2.0 * w1;
  const std::complex<double> p2 = 2.0 * w2;
  std::complex<double> sum = 1.0 / z;
  // Pairing +-w: 1/(z-w) + 1/(z+w) + 2z/w^2 = 2 z^3 / (w^2 (z^2 - w^2)),
  // so shells can be summed in any order without conditional convergence.
  const std::complex<double> z2 = z * z;
  const std::complex<double> z3 = z2 * z;
  for (int k = 1; k <= K; ++k) {
    std::complex<double> shell = 0.0;
    auto add = [&](int m, int n) {
      // one representative per +-pair: first nonzero coordinate positive
      if (m < 0 || (m == 0 && n < 0)) return;
      const std::complex<double> w = double(m) * p1 + double(n) * p2;
      const std::complex<double> w2c = w * w;
      shell += 2.0 * z3 / (w2c * (z2 - w2c));
    };
    for (int m = -k; m <= k; ++m) {
      add(m, -k);
      add(m, k);
    }
    for (int n = -k + 1; n <= k - 1; ++n) {
      add(-k, n);
      add(k, n);
    }
    sum += shell;
  }
  return sum;
}

double classical_cot_partial_fractions(double t, int K) {
  double sum = 1.0 / t;
  const double t2 = t * t;
  for (int n = K; n >= 1; --n) {
    const double npi = n * M_PI;
    sum += 2.0 * t / (t2 - npi * npi);
  }
  return sum;
}

}  // namespace cliff::oracles
