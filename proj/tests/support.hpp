#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <random>

#include "evo/algebra.hpp"

namespace evo::test {

inline Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  const int n = static_cast<int>(r.size());
  Matrix m(n, n);
  int i = 0;
  for (const auto& row : r) {
    int k = 0;
    for (double v : row) m(i, k++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Random signed permutation times diagonal, magnitudes in [lo, hi].
inline BasisChange random_monomial(std::mt19937_64& rng, int n, double lo = 0.1, double hi = 3.0) {
  std::array<int, 3> perm{0, 1, 2};
  std::shuffle(perm.begin(), perm.begin() + n, rng);
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution flip(0.5);
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, perm[i]) = (flip(rng) ? -1.0 : 1.0) * mag(rng);
  return BasisChange(p);
}

/// Plain (P o P) M P^{-1} via an explicit inverse; shares nothing with transform().
inline Matrix reference_transform(const Matrix& m, const Matrix& p) {
  return p.cwiseProduct(p) * m * p.inverse();
}

}  // namespace evo::test
