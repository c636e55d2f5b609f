#pragma once

#include <utility>
#include <vector>

#include "cliff/multiindex.hpp"
#include "cliff/paravector.hpp"

namespace cliff {

/// All distinct arrangements of the multiset {e0^a0, e1^a1, e2^a2, e3^a3},
/// in lexicographic order.  Letters are 0..3.
std::vector<std::vector<int>> multiset_permutations(const MultiIndex& alpha);

/// P_alpha(x) = sum over distinct arrangements sigma of
///   e_{sigma(1)} x e_{sigma(2)} x ... x e_{sigma(|alpha|)}
/// (|alpha| letters with x interleaved; degree |alpha|-1 in x).
Paravector eval_P(const MultiIndex& alpha, const Paravector& x);

/// S_beta(x) = sum over distinct arrangements sigma of
///   x^{-1} e_{sigma(1)} x^{-1} ... e_{sigma(|beta|)} x^{-1};
/// beta = 0 gives x^{-1} itself.
Paravector eval_S(const MultiIndex& beta, const Paravector& x);

/// Compares the closed form (1 - lambda x)^{-1} lambda against the partial
/// sum of the generating series, sum_{1 <= |alpha| <= K} P_alpha(x) lambda_alpha
/// with lambda_alpha = prod lambda_i^{alpha_i}.  Returns (closed, partial).
std::pair<Paravector, Paravector> generating_check(
    const std::array<double, 4>& lambda, const Paravector& x, int K);

}  // namespace cliff
