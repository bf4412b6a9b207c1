#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evo/algebra.hpp"

namespace evo {

struct SolverOptions {
  int restarts = 64;
  double radius = 10.0;  // half-width of the start box
  std::uint64_t seed = 0;
  int max_iter = 100;
  double merge_radius = 1e-6;

  void validate() const;
};

enum class SolveMethod { ClosedForm, MultistartNewton };

const char* to_string(SolveMethod m);

/// Non-zero real solutions of F(x) = x. `complete` is only set when the
/// closed-form path produced the list.
struct FixedPointReport {
  std::vector<Vector> points;
  std::vector<double> residuals;  // |F(x) - x|_inf per point
  bool complete = false;
  SolveMethod method = SolveMethod::MultistartNewton;
  std::vector<std::string> notes;
};

/// The evolution operator x -> x^2, component-wise x_k' = sum_i a_ik x_i^2.
Vector evolution_map(const EvolutionAlgebra& a, const Vector& x);

/// J[k][i] = 2 a_ik x_i (row = output component, column = input component).
Matrix jacobian(const EvolutionAlgebra& a, const Vector& x);

double fixed_point_residual(const EvolutionAlgebra& a, const Vector& x);

/// Dispatches to the closed form when one applies, otherwise multistart Newton.
FixedPointReport fixed_points(const EvolutionAlgebra& a, const SolverOptions& opts = {}, const Tolerances& tol = {});

/// Closed forms for algebras with dim(E^2) <= 1 and for the E6/E7 families of
/// dimension two; nullopt when the matrix is outside those shapes.
std::optional<FixedPointReport> closed_form_fixed_points(const EvolutionAlgebra& a, const Tolerances& tol = {});

/// Seeded multistart Newton on F(x) - x over [-radius, radius]^n. Results are
/// sorted lexicographically and deduplicated, so the report does not depend on
/// the order in which starts converge.
FixedPointReport multistart_fixed_points(const EvolutionAlgebra& a, const SolverOptions& opts = {},
                                         const Tolerances& tol = {});

/// The evolution algebra whose structure matrix is jacobian(a, x).
EvolutionAlgebra jacobian_algebra(const EvolutionAlgebra& a, const Vector& x);

struct Linearization {
  Vector point;
  EvolutionAlgebra algebra;
};

std::vector<Linearization> linearize_at_fixed_points(const EvolutionAlgebra& a, const SolverOptions& opts = {},
                                                     const Tolerances& tol = {});

/// -3 / cbrt(4): below this a4 the cubic t^3 + a4 t - 1 has three real roots.
inline const double kE7DiscriminantBound = -3.0 / 1.5874010519681994;

}  // namespace evo
