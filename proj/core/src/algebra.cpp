#include "evo/algebra.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace evo {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteError(std::string(what) + ": non-finite entry");
}

void require_length(const EvolutionAlgebra& a, const Vector& x) {
  if (x.size() != a.dim()) {
    throw DimensionError("vector length " + std::to_string(x.size()) + " does not match algebra dimension " +
                         std::to_string(a.dim()));
  }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

void Tolerances::validate() const {
  if (!(eps_rank > 0.0) || !(eps_residual > 0.0) || !(eps_det > 0.0) || !(eps_sign > 0.0)) {
    throw InvalidParams("tolerances must be strictly positive");
  }
}

EvolutionAlgebra::EvolutionAlgebra(int dim, const Matrix& matrix) {
  if (dim != 2 && dim != 3) throw DimensionError("dimension must be 2 or 3, got " + std::to_string(dim));
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw DimensionError("structure matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  require_finite(matrix, "structure matrix");
  matrix_ = matrix;
}

BasisChange::BasisChange(const Matrix& rows) {
  if (rows.rows() != rows.cols() || rows.rows() < 1) throw DimensionError("basis change must be square");
  require_finite(rows, "basis change");
  rows_ = rows;
}

BasisChange BasisChange::identity(int dim) { return BasisChange(Matrix::Identity(dim, dim)); }

BasisChange BasisChange::diagonal(const Vector& scales) {
  Matrix m = Matrix::Zero(scales.size(), scales.size());
  m.diagonal() = scales;
  return BasisChange(m);
}

BasisChange BasisChange::permutation(std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  Matrix m = Matrix::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    if (perm[p] < 0 || perm[p] >= n) throw DimensionError("permutation index out of range");
    m(p, perm[p]) = 1.0;
  }
  if (std::abs(m.determinant()) < 0.5) throw DimensionError("not a permutation");
  return BasisChange(m);
}

BasisChange BasisChange::inverse() const {
  if (det() == 0.0) throw Singular("basis change is singular");
  return BasisChange(rows_.inverse());
}

EvolutionAlgebra make_algebra(int dim, const Matrix& matrix) { return EvolutionAlgebra(dim, matrix); }

Vector multiply(const EvolutionAlgebra& a, const Vector& x, const Vector& y) {
  require_length(a, x);
  require_length(a, y);
  // z^T = (x o y)^T M
  const Vector xy = x.cwiseProduct(y);
  return a.matrix().transpose() * xy;
}

Vector square(const EvolutionAlgebra& a, const Vector& x) { return multiply(a, x, x); }

int derived_dim(const EvolutionAlgebra& a, const Tolerances& tol) {
  Eigen::JacobiSVD<Matrix> svd(a.matrix());
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  if (top == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.eps_rank * top) ++rank;
  }
  return rank;
}

double naturality_residual(const EvolutionAlgebra& a, const BasisChange& p) {
  if (p.dim() != a.dim()) throw DimensionError("basis change dimension does not match algebra");
  const Matrix& m = a.matrix();
  const Matrix& rows = p.rows();
  double worst = 0.0;
  for (int i = 0; i < rows.rows(); ++i) {
    for (int j = i + 1; j < rows.rows(); ++j) {
      const Vector weights = rows.row(i).transpose().cwiseProduct(rows.row(j).transpose());
      const Vector prod = m.transpose() * weights;
      worst = std::max(worst, prod.cwiseAbs().maxCoeff());
    }
  }
  const double row_norm = rows.rowwise().squaredNorm().maxCoeff();
  const double scale = std::max(1.0, max_abs(m) * row_norm);
  return worst / scale;
}

bool is_natural_change(const EvolutionAlgebra& a, const BasisChange& p, const Tolerances& tol) {
  return naturality_residual(a, p) <= tol.eps_residual;
}

EvolutionAlgebra transform(const EvolutionAlgebra& a, const BasisChange& p, const Tolerances& tol) {
  if (p.dim() != a.dim()) throw DimensionError("basis change dimension does not match algebra");
  if (!(std::abs(p.det()) > tol.eps_det)) throw Singular("basis change is singular (|det P| <= eps_det)");
  if (!is_natural_change(a, p, tol)) throw NotNatural("basis change is not natural for this algebra");
  const Matrix squared = p.rows().cwiseProduct(p.rows());
  // Solve X P = S M rather than forming P^{-1} explicitly.
  const Matrix lhs = squared * a.matrix();
  const Matrix result = p.rows().transpose().partialPivLu().solve(lhs.transpose()).transpose();
  return EvolutionAlgebra(a.dim(), result);
}

BasisChange compose_changes(const BasisChange& q, const BasisChange& p) {
  if (q.dim() != p.dim()) throw DimensionError("cannot compose basis changes of different dimension");
  return BasisChange(q.rows() * p.rows());
}

double algebra_distance(const EvolutionAlgebra& a, const EvolutionAlgebra& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  const double scale = std::max({1.0, max_abs(a.matrix()), max_abs(b.matrix())});
  return max_abs(a.matrix() - b.matrix()) / scale;
}

bool algebras_equal(const EvolutionAlgebra& a, const EvolutionAlgebra& b, const Tolerances& tol) {
  return algebra_distance(a, b) <= tol.eps_residual;
}

}  // namespace evo
