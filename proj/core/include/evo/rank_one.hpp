#pragma once

#include <optional>

#include "evo/algebra.hpp"

namespace evo {

/// When dim(E^2) = 1 every square is a multiple of one vector w:
/// e_i^2 = weights_i * w, i.e. x * y = B(x, y) w with B = diag(weights).
/// The pivot row is w itself, so weights[pivot] = 1.
struct RankOneView {
  Vector weights;
  Vector direction;
  int pivot = 0;
  double residual = 0.0;  // max_i |row_i - weights_i w|_inf / |w|_inf
};

/// Pivot defaults to the row of largest max-norm (lowest index on ties).
/// Throws RankNotOne for the zero matrix.
RankOneView rank_one_view(const EvolutionAlgebra& a, std::optional<int> pivot = std::nullopt);

/// B(x, y) = sum_i weights_i x_i y_i.
double bilinear(const Vector& weights, const Vector& x, const Vector& y);

/// Builds a natural basis directly from the bilinear-form picture, in which
/// the structure matrix has entries in {0, 1, -1}:
///   w in rad(B)   -> {w, radical complement, non-radical e_i / sqrt|u_i|}
///   B(w, w) != 0  -> {w / B(w, w), B-orthogonal complement of w, rescaled}
///   B(w, w) == 0  -> {(w + z) / 2b, (w - z) / 2b, ...} for an isotropic z
///                    with B(w, z) = 2b != 0
/// The result is one signed permutation and diagonal scaling away from a
/// canonical form. Requires derived_dim(a) == 1.
BasisChange rank_one_normal_basis(const EvolutionAlgebra& a, const Tolerances& tol = {});

}  // namespace evo
