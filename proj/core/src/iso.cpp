#include "evo/iso.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace evo {

namespace {

constexpr double kPatternZero = 1e-12;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Stacked residual of the naturality equations and (P o P) M_A - M_B P,
// with its Jacobian with respect to P in row-major order.
void least_squares_system(const Matrix& ma, const Matrix& mb, const Eigen::VectorXd& vars, Eigen::VectorXd& r,
                          Eigen::MatrixXd& jac) {
  const int n = static_cast<int>(ma.rows());
  auto at = [&](int p, int i) { return vars(p * n + i); };
  const int pairs = n * (n - 1) / 2;
  r.setZero(pairs * n + n * n);
  jac.setZero(r.size(), n * n);
  int row = 0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      for (int k = 0; k < n; ++k, ++row) {
        for (int i = 0; i < n; ++i) {
          r(row) += ma(i, k) * at(p, i) * at(q, i);
          jac(row, p * n + i) += ma(i, k) * at(q, i);
          jac(row, q * n + i) += ma(i, k) * at(p, i);
        }
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int k = 0; k < n; ++k, ++row) {
      for (int i = 0; i < n; ++i) {
        r(row) += at(p, i) * at(p, i) * ma(i, k);
        jac(row, p * n + i) += 2.0 * at(p, i) * ma(i, k);
      }
      for (int j = 0; j < n; ++j) {
        r(row) -= mb(p, j) * at(j, k);
        jac(row, j * n + k) -= mb(p, j);
      }
    }
  }
}

Matrix unpack(const Eigen::VectorXd& vars, int n) {
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) p(i, k) = vars(i * n + k);
  }
  return p;
}

}  // namespace

void IsoOptions::validate() const {
  if (restarts < 1 || max_iter < 1) throw InvalidParams("iso options: restarts >= 1 and max_iter >= 1 required");
}

const char* to_string(IsoStage s) {
  switch (s) {
    case IsoStage::ExactFamily:
      return "exact-family";
    case IsoStage::LeastSquares:
      return "least-squares";
    case IsoStage::BudgetExhausted:
      break;
  }
  return "budget-exhausted";
}

Matrix transformed_matrix(const EvolutionAlgebra& a, const BasisChange& p) {
  if (p.dim() != a.dim()) throw DimensionError("basis change dimension does not match algebra");
  Eigen::FullPivLU<Matrix> lu(p.rows().transpose());
  if (!lu.isInvertible()) throw Singular("basis change is singular");
  const Matrix lhs = p.rows().cwiseProduct(p.rows()) * a.matrix();
  return lu.solve(lhs.transpose()).transpose();
}

IsoCheck verify_iso(const EvolutionAlgebra& a, const EvolutionAlgebra& b, const BasisChange& p,
                    const Tolerances& tol) {
  if (a.dim() != b.dim() || p.dim() != a.dim()) throw DimensionError("verify_iso: shape mismatch");
  if (!(std::abs(p.det()) > tol.eps_det)) throw Singular("verify_iso: |det P| <= eps_det");
  const double natural = naturality_residual(a, p);
  const Matrix image = transformed_matrix(a, p);
  double distance = std::numeric_limits<double>::infinity();
  if (image.allFinite()) distance = algebra_distance(EvolutionAlgebra(a.dim(), image), b);
  IsoCheck check;
  check.residual = std::max(natural, distance);
  check.ok = check.residual <= tol.eps_residual;
  return check;
}

std::optional<BasisChange> monomial_iso(const EvolutionAlgebra& a, const EvolutionAlgebra& b,
                                        const Tolerances& tol) {
  if (a.dim() != b.dim()) return std::nullopt;
  const int n = a.dim();
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const double scale_a = std::max(max_abs(ma), 1e-300);
  const double scale_b = std::max(max_abs(mb), 1e-300);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Matrix permuted(n, n);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) permuted(p, q) = ma(perm[p], perm[q]);
    }
    bool pattern_ok = true;
    std::vector<std::array<int, 2>> live;
    for (int p = 0; p < n && pattern_ok; ++p) {
      for (int q = 0; q < n; ++q) {
        const bool za = std::abs(permuted(p, q)) <= kPatternZero * scale_a;
        const bool zb = std::abs(mb(p, q)) <= kPatternZero * scale_b;
        if (za != zb) {
          pattern_ok = false;
          break;
        }
        if (!za) live.push_back({p, q});
      }
    }
    if (!pattern_ok) continue;

    // log|d_p| from 2 x_p - x_q = log|B_pq / N_pq|, minimum-norm least squares.
    Eigen::VectorXd logs = Eigen::VectorXd::Zero(n);
    if (!live.empty()) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(live.size()), n);
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(live.size()));
      for (std::size_t e = 0; e < live.size(); ++e) {
        const auto [p, q] = live[e];
        lhs(static_cast<Eigen::Index>(e), p) += 2.0;
        lhs(static_cast<Eigen::Index>(e), q) -= 1.0;
        rhs(static_cast<Eigen::Index>(e)) = std::log(std::abs(mb(p, q) / permuted(p, q)));
      }
      logs = lhs.completeOrthogonalDecomposition().solve(rhs);
    }

    for (int signs = 0; signs < (1 << n); ++signs) {
      Matrix rows = Matrix::Zero(n, n);
      for (int p = 0; p < n; ++p) rows(p, perm[p]) = ((signs >> p) & 1 ? -1.0 : 1.0) * std::exp(logs(p));
      const BasisChange candidate(rows);
      if (!(std::abs(candidate.det()) > tol.eps_det)) continue;
      if (verify_iso(a, b, candidate, tol).ok) return candidate;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

IsoResult iso_search(const EvolutionAlgebra& a, const EvolutionAlgebra& b, const IsoOptions& opts,
                     const Tolerances& tol) {
  opts.validate();
  IsoResult result;
  result.residual = std::numeric_limits<double>::infinity();
  if (a.dim() != b.dim()) return result;
  const int n = a.dim();

  if (opts.include_exact_family) {
    if (auto p = monomial_iso(a, b, tol)) {
      result.found = true;
      result.residual = verify_iso(a, b, *p, tol).residual;
      result.witness = std::move(p);
      result.stage = IsoStage::ExactFamily;
      return result;
    }
  }

  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const int vars = n * n;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  Eigen::VectorXd r_trial;
  Eigen::MatrixXd jac_trial;

  for (int restart = 0; restart < opts.restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> start(-3.0, 3.0);
    Eigen::VectorXd x(vars);
    for (int i = 0; i < vars; ++i) x(i) = start(rng);

    double lambda = 1e-3;
    least_squares_system(ma, mb, x, r, jac);
    double cost = r.squaredNorm();
    for (int it = 0; it < opts.max_iter && cost > 1e-30; ++it) {
      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd grad = jac.transpose() * r;
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-9);
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      if (!step.allFinite()) break;
      const Eigen::VectorXd trial = x + step;
      least_squares_system(ma, mb, trial, r_trial, jac_trial);
      const double trial_cost = r_trial.squaredNorm();
      if (trial_cost < cost) {
        const double gain = cost - trial_cost;
        x = trial;
        r.swap(r_trial);
        jac.swap(jac_trial);
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        if (gain <= 1e-14 * cost && step.norm() <= 1e-12 * (1.0 + x.norm())) break;
      } else {
        lambda *= 4.0;
        if (lambda > 1e12) break;
      }
    }

    if (!x.allFinite()) continue;
    const BasisChange candidate(unpack(x, n));
    if (!(std::abs(candidate.det()) > tol.eps_det)) continue;
    const IsoCheck check = verify_iso(a, b, candidate, tol);
    result.residual = std::min(result.residual, check.residual);
    if (check.ok) {
      result.found = true;
      result.residual = check.residual;
      result.witness = candidate;
      result.stage = IsoStage::LeastSquares;
      return result;
    }
  }
  return result;
}

}  // namespace evo
