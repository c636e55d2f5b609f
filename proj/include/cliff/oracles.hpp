#pragma once

#include <complex>

namespace cliff::oracles {

/// Classical Weierstrass zeta for the lattice m*(2 w1) + n*(2 w2),
/// summed over max(|m|,|n|) <= K with +-w symmetrization:
///   zeta(z) = 1/z + sum' [ 1/(z-w) + 1/w + z/w^2 ].
/// Independent of the Clifford code paths; complex arithmetic only.
std::complex<double> classical_weierstrass_zeta(std::complex<double> z,
                                                std::complex<double> w1,
                                                std::complex<double> w2,
                                                int K);

/// Partial-fraction expansion of cot, truncated at n = K:
///   cot(t) = 1/t + sum_{n=1}^{K} 2 t / (t^2 - n^2 pi^2).
double classical_cot_partial_fractions(double t, int K);

}  // namespace cliff::oracles
