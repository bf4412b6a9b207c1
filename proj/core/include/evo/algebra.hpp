#pragma once

#include <Eigen/Dense>

#include <span>

#include "evo/error.hpp"

namespace evo {

// Dimensions are 2 or 3, so everything lives on the stack.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

struct Tolerances {
  double eps_rank = 1e-9;      // relative singular-value cutoff
  double eps_residual = 1e-8;  // scaled identity / naturality residual
  double eps_det = 1e-12;      // |det P| floor for basis changes
  double eps_sign = 1e-9;      // dead-band for sign / zero branch predicates (relative)

  /// Throws InvalidParams unless every field is strictly positive.
  void validate() const;
};

/// Evolution algebra over the reals in a fixed natural basis e_1..e_n.
/// Entry (i, k) of the structure matrix is the coefficient of e_k in e_i^2.
class EvolutionAlgebra {
 public:
  EvolutionAlgebra(int dim, const Matrix& matrix);

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  double operator()(int i, int k) const { return matrix_(i, k); }

 private:
  Matrix matrix_;
};

/// Natural basis change: row p holds the old-basis coordinates of the new
/// basis element f_p. Only squareness and finiteness are enforced here;
/// invertibility is tolerance-dependent and checked by the consumers.
class BasisChange {
 public:
  explicit BasisChange(const Matrix& rows);

  static BasisChange identity(int dim);
  static BasisChange diagonal(const Vector& scales);
  /// Row p is e_{perm[p]}.
  static BasisChange permutation(std::span<const int> perm);

  int dim() const noexcept { return static_cast<int>(rows_.rows()); }
  const Matrix& rows() const noexcept { return rows_; }
  double det() const { return rows_.determinant(); }
  BasisChange inverse() const;

 private:
  Matrix rows_;
};

EvolutionAlgebra make_algebra(int dim, const Matrix& matrix);

/// z_k = sum_i a_ik x_i y_i.
Vector multiply(const EvolutionAlgebra& a, const Vector& x, const Vector& y);
Vector square(const EvolutionAlgebra& a, const Vector& x);

/// Dimension of E^2, i.e. the numerical row rank of the structure matrix.
int derived_dim(const EvolutionAlgebra& a, const Tolerances& tol = {});

/// Largest |f_p * f_r| coefficient over p != r, divided by
/// max(1, max|a_ik| * max_p |P_p|^2).
double naturality_residual(const EvolutionAlgebra& a, const BasisChange& p);
bool is_natural_change(const EvolutionAlgebra& a, const BasisChange& p, const Tolerances& tol = {});

/// Structure matrix in the basis given by P: (P o P) M P^{-1}.
/// Throws Singular if |det P| <= eps_det and NotNatural if the rows of P do
/// not pairwise annihilate.
EvolutionAlgebra transform(const EvolutionAlgebra& a, const BasisChange& p, const Tolerances& tol = {});

/// R = Q P, for Q written in the basis produced by P.
BasisChange compose_changes(const BasisChange& q, const BasisChange& p);

/// Max-norm distance scaled by max(1, |A|max, |B|max); +inf on dimension mismatch.
double algebra_distance(const EvolutionAlgebra& a, const EvolutionAlgebra& b);
bool algebras_equal(const EvolutionAlgebra& a, const EvolutionAlgebra& b, const Tolerances& tol = {});

}  // namespace evo
