#include "evo/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "evo/polynomial.hpp"
#include "evo/rank_one.hpp"

namespace evo {

namespace {

constexpr double kDivergence = 1e6;

void require_length(const EvolutionAlgebra& a, const Vector& x) {
  if (x.size() != a.dim()) throw DimensionError("point length does not match algebra dimension");
}

bool near(double v, double target, const Tolerances& tol) { return std::abs(v - target) <= tol.eps_residual; }

// Newton on G(x) = F(x) - x. Falls back to a damped least-squares step when
// J - I is (numerically) singular.
std::optional<Vector> newton(const EvolutionAlgebra& a, Vector x, int max_iter) {
  const int n = a.dim();
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = evolution_map(a, x) - x;
    if (g.cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, x.squaredNorm())) break;
    const Matrix jg = jacobian(a, x) - Matrix::Identity(n, n);
    Eigen::FullPivLU<Matrix> lu(jg);
    Vector step;
    if (lu.isInvertible() && lu.rcond() > 1e-12) {
      step = lu.solve(-g);
    } else {
      Eigen::JacobiSVD<Matrix> svd(jg, Eigen::ComputeFullU | Eigen::ComputeFullV);
      svd.setThreshold(1e-10);
      step = 0.5 * svd.solve(-g);
    }
    x += step;
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergence) return std::nullopt;
    if (step.cwiseAbs().maxCoeff() <= 1e-16 * std::max(1.0, x.cwiseAbs().maxCoeff())) break;
  }
  return x;
}

// Final Newton clean-up for closed-form candidates.
Vector polish(const EvolutionAlgebra& a, const Vector& x) {
  const auto refined = newton(a, x, 8);
  if (refined && fixed_point_residual(a, *refined) <= fixed_point_residual(a, x)) return *refined;
  return x;
}

FixedPointReport finalize(const EvolutionAlgebra& a, std::vector<Vector> candidates, double merge_radius,
                          const Tolerances& tol, SolveMethod method, bool complete) {
  std::vector<Vector> kept;
  for (const Vector& x : candidates) {
    if (!x.allFinite()) continue;
    if (x.cwiseAbs().maxCoeff() > kDivergence) continue;
    if (x.cwiseAbs().maxCoeff() <= merge_radius) continue;  // the zero fixed point is never reported
    if (fixed_point_residual(a, x) > tol.eps_residual) continue;
    kept.push_back(x);
  }
  std::sort(kept.begin(), kept.end(), [](const Vector& l, const Vector& r) {
    return std::lexicographical_compare(l.data(), l.data() + l.size(), r.data(), r.data() + r.size());
  });
  FixedPointReport report;
  report.method = method;
  report.complete = complete;
  for (const Vector& x : kept) {
    const bool duplicate = std::any_of(report.points.begin(), report.points.end(), [&](const Vector& y) {
      return (x - y).cwiseAbs().maxCoeff() <= merge_radius;
    });
    if (duplicate) continue;
    report.points.push_back(x);
    report.residuals.push_back(fixed_point_residual(a, x));
  }
  return report;
}

Vector point2(double x1, double x2) {
  Vector v(2);
  v << x1, x2;
  return v;
}

// x1 = x1^2 + a3 x2^2, x2 = a2 x1^2 + x2^2. Eliminating x2 through the linear
// relation x2 = a2 x1^2 + (x1 - x1^2) / a3 leaves the quartic
// ((a2 a3 - 1) x1^2 + x1)^2 + a3 x1^2 - a3 x1 = 0.
std::vector<Vector> e6_candidates(double a2, double a3) {
  const bool swapped = std::abs(a3) < std::abs(a2);
  const double p = swapped ? a3 : a2;
  const double q = swapped ? a2 : a3;
  std::vector<Vector> out;
  if (std::abs(q) <= 1e-10) {
    // Both parameters are (numerically) zero: x1, x2 in {0, 1} independently,
    // and otherwise x1 in {0, 1} with x2 from x2^2 - x2 + p x1^2 = 0.
    for (double x1 : {0.0, 1.0}) {
      const double disc = 1.0 - 4.0 * p * x1 * x1;
      if (disc < 0.0) continue;
      for (double sgn : {-1.0, 1.0}) out.push_back(point2(x1, 0.5 * (1.0 + sgn * std::sqrt(disc))));
    }
  } else {
    const double k = p * q - 1.0;
    const double coeffs[] = {k * k, 2.0 * k, 1.0 + q, -q, 0.0};
    for (double x1 : polynomial_real_roots(coeffs)) out.push_back(point2(x1, p * x1 * x1 + (x1 - x1 * x1) / q));
  }
  if (swapped) {
    for (Vector& v : out) std::swap(v(0), v(1));
  }
  return out;
}

std::vector<Vector> e7_candidates(double a4) {
  // x1 = x2^2 and x2 (x2^3 + a4 x2 - 1) = 0.
  std::vector<Vector> out;
  for (double t : depressed_cubic_real_roots(a4, -1.0)) out.push_back(point2(t * t, t));
  return out;
}

std::string e7_note(double a4) {
  std::ostringstream out;
  out.precision(17);
  out << "E7(a4) with a4 = " << a4 << " < -3/cbrt(4): t^3 + a4 t - 1 = 0 has three real roots, so real fixed points "
      << "exist here; the bound a4 >= -3/cbrt(4) separates one from three real roots and is not an existence "
      << "condition. All real fixed points are reported.";
  return out.str();
}

}  // namespace

void SolverOptions::validate() const {
  if (restarts < 1 || !(radius > 0.0) || max_iter < 1 || !(merge_radius > 0.0)) {
    throw InvalidParams("solver options: restarts >= 1, radius > 0, max_iter >= 1 and merge_radius > 0 required");
  }
}

const char* to_string(SolveMethod m) {
  return m == SolveMethod::ClosedForm ? "closed-form" : "multistart-newton";
}

Vector evolution_map(const EvolutionAlgebra& a, const Vector& x) { return square(a, x); }

Matrix jacobian(const EvolutionAlgebra& a, const Vector& x) {
  require_length(a, x);
  const int n = a.dim();
  Matrix j(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) j(k, i) = 2.0 * a(i, k) * x(i);
  }
  return j;
}

double fixed_point_residual(const EvolutionAlgebra& a, const Vector& x) {
  return (evolution_map(a, x) - x).cwiseAbs().maxCoeff();
}

std::optional<FixedPointReport> closed_form_fixed_points(const EvolutionAlgebra& a, const Tolerances& tol) {
  const int rank = derived_dim(a, tol);
  const double merge = 1e-9;
  if (rank == 0) return finalize(a, {}, merge, tol, SolveMethod::ClosedForm, true);
  if (rank == 1) {
    // F(x) = B(x, x) w, so x = t w with t = 1 / B(w, w) whenever B(w, w) != 0.
    const RankOneView view = rank_one_view(a);
    const double s = bilinear(view.weights, view.direction, view.direction);
    const double scale = (view.weights.cwiseAbs().array() * view.direction.array().square()).sum();
    std::vector<Vector> candidates;
    if (std::abs(s) > 1e-12 * scale) candidates.push_back(polish(a, view.direction / s));
    return finalize(a, std::move(candidates), merge, tol, SolveMethod::ClosedForm, true);
  }
  if (a.dim() != 2) return std::nullopt;

  const Matrix& m = a.matrix();
  std::vector<Vector> candidates;
  std::vector<std::string> notes;
  if (near(m(0, 0), 1.0, tol) && near(m(1, 1), 1.0, tol)) {
    candidates = e6_candidates(m(0, 1), m(1, 0));
  } else if (near(m(0, 0), 0.0, tol) && near(m(0, 1), 1.0, tol) && near(m(1, 0), 1.0, tol)) {
    const double a4 = m(1, 1);
    candidates = e7_candidates(a4);
    if (a4 < kE7DiscriminantBound) notes.push_back(e7_note(a4));
  } else {
    return std::nullopt;
  }
  for (Vector& x : candidates) x = polish(a, x);
  FixedPointReport report = finalize(a, std::move(candidates), merge, tol, SolveMethod::ClosedForm, true);
  report.notes = std::move(notes);
  return report;
}

FixedPointReport multistart_fixed_points(const EvolutionAlgebra& a, const SolverOptions& opts, const Tolerances& tol) {
  opts.validate();
  const int n = a.dim();
  constexpr std::array<int, 3> kBases = {2, 3, 5};

  // Halton points under a seeded Cranley-Patterson rotation.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, 3> shift{};
  for (int d = 0; d < n; ++d) shift[d] = unit(rng);

  std::vector<Vector> candidates;
  for (int r = 0; r < opts.restarts; ++r) {
    Vector start(n);
    for (int d = 0; d < n; ++d) {
      double h = 0.0;
      double f = 1.0 / kBases[d];
      for (int i = r + 1; i > 0; i /= kBases[d], f /= kBases[d]) h += f * (i % kBases[d]);
      start(d) = opts.radius * (2.0 * std::fmod(h + shift[d], 1.0) - 1.0);
    }
    if (auto x = newton(a, start, opts.max_iter)) candidates.push_back(*x);
  }
  FixedPointReport report =
      finalize(a, std::move(candidates), opts.merge_radius, tol, SolveMethod::MultistartNewton, false);
  if (a.dim() == 2) {
    const Matrix& m = a.matrix();
    if (near(m(0, 0), 0.0, tol) && near(m(0, 1), 1.0, tol) && near(m(1, 0), 1.0, tol) &&
        m(1, 1) < kE7DiscriminantBound) {
      report.notes.push_back(e7_note(m(1, 1)));
    }
  }
  return report;
}

FixedPointReport fixed_points(const EvolutionAlgebra& a, const SolverOptions& opts, const Tolerances& tol) {
  opts.validate();
  if (auto closed = closed_form_fixed_points(a, tol)) return *std::move(closed);
  return multistart_fixed_points(a, opts, tol);
}

EvolutionAlgebra jacobian_algebra(const EvolutionAlgebra& a, const Vector& x) {
  return EvolutionAlgebra(a.dim(), jacobian(a, x));
}

std::vector<Linearization> linearize_at_fixed_points(const EvolutionAlgebra& a, const SolverOptions& opts,
                                                     const Tolerances& tol) {
  std::vector<Linearization> out;
  for (const Vector& x : fixed_points(a, opts, tol).points) out.push_back({x, jacobian_algebra(a, x)});
  return out;
}

}  // namespace evo
