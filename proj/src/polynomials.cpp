#include "cliff/polynomials.hpp"

#include <algorithm>
#include <map>

#include "cliff/errors.hpp"

namespace cliff {

std::vector<std::vector<int>> multiset_permutations(const MultiIndex& alpha) {
  alpha.validate();
  const int n = alpha.degree();
  if (n == 0) throw EmptyIndexError("multiset_permutations: |alpha| = 0");
  std::vector<int> letters;
  letters.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < alpha[i]; ++k) letters.push_back(i);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(letters);
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

namespace {

const Multivector& basis_mv(int i) {
  static const std::array<Multivector, 4> e = {
      Multivector::basis(0), Multivector::basis(1), Multivector::basis(2),
      Multivector::basis(3)};
  return e[static_cast<std::size_t>(i)];
}

}  // namespace

Paravector eval_P(const MultiIndex& alpha, const Paravector& x) {
  const auto perms = multiset_permutations(alpha);
  const Multivector xm = x.to_multivector();
  Multivector acc;
  for (const auto& seq : perms) {
    Multivector term = basis_mv(seq[0]);
    for (std::size_t i = 1; i < seq.size(); ++i)
      term = term * xm * basis_mv(seq[i]);
    acc += term;
  }
  return extract_paravector(acc);
}

Paravector eval_S(const MultiIndex& beta, const Paravector& x) {
  beta.validate();
  const Multivector xim = inverse(x).to_multivector();
  if (beta.degree() == 0) return extract_paravector(xim);
  Multivector acc;
  for (const auto& seq : multiset_permutations(beta)) {
    Multivector term = xim;
    for (int letter : seq) term = term * basis_mv(letter) * xim;
    acc += term;
  }
  return extract_paravector(acc);
}

namespace {

// Solves u * y = rhs for y in the full algebra, via the 8x8 left-
// multiplication matrix of u.  Local helper for generating_check only;
// general multivector inverses are deliberately not part of the API.
Multivector solve_left(const Multivector& u, const Multivector& rhs) {
  double A[8][9];
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 9; ++c) A[r][c] = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      A[detail::kCayley.index[i][j]][j] += detail::kCayley.sign[i][j] * u.c[i];
  for (int r = 0; r < 8; ++r) A[r][8] = rhs.c[r];

  for (int col = 0; col < 8; ++col) {
    int piv = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-14)
      throw NotInvertibleError("1 - lambda*x is not invertible");
    if (piv != col)
      for (int c = col; c < 9; ++c) std::swap(A[piv][c], A[col][c]);
    const double inv = 1.0 / A[col][col];
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = A[r][col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < 9; ++c) A[r][c] -= f * A[col][c];
    }
  }
  Multivector y;
  for (int r = 0; r < 8; ++r) y.c[r] = A[r][8] / A[r][r];
  return y;
}

}  // namespace

std::pair<Paravector, Paravector> generating_check(
    const std::array<double, 4>& lambda, const Paravector& x, int K) {
  if (K < 1) throw BadIndexError("generating_check: K must be >= 1");
  const Paravector lam{lambda[0], lambda[1], lambda[2], lambda[3]};

  const Multivector one = Multivector::scalar(1.0);
  const Multivector u = one - lam.to_multivector() * x.to_multivector();
  const Paravector closed =
      extract_paravector(solve_left(u, lam.to_multivector()));

  // Partial sum grouped per alpha.  B_alpha = sum over distinct arrangements
  // of the letter products; recursion over the leading letter visits each
  // arrangement exactly once:
  //   B_alpha = sum_{i: alpha_i > 0} e_i x B_{alpha - delta_i}.
  const Multivector xm = x.to_multivector();
  std::map<std::array<int, 4>, Multivector> level;
  for (int i = 0; i < 4; ++i) {
    std::array<int, 4> a{};
    a[static_cast<std::size_t>(i)] = 1;
    level[a] = basis_mv(i);
  }
  auto lambda_pow = [&](const std::array<int, 4>& a) {
    double r = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < a[static_cast<std::size_t>(i)]; ++k)
        r *= lambda[static_cast<std::size_t>(i)];
    return r;
  };

  Multivector partial;
  for (int k = 1; k <= K; ++k) {
    for (const auto& [a, B] : level) partial += lambda_pow(a) * B;
    if (k == K) break;
    std::map<std::array<int, 4>, Multivector> next;
    for (const auto& [a, B] : level) {
      const Multivector xB = xm * B;
      for (int i = 0; i < 4; ++i) {
        std::array<int, 4> b = a;
        ++b[static_cast<std::size_t>(i)];
        next[b] += basis_mv(i) * xB;
      }
    }
    level = std::move(next);
  }
  return {closed, extract_paravector(partial)};
}

}  // namespace cliff
