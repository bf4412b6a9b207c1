#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "evo/algebra.hpp"

namespace evo {

struct IsoOptions {
  int restarts = 256;
  std::uint64_t seed = 0;
  int max_iter = 200;
  bool include_exact_family = true;  // signed permutations x diagonal scalings, solved in closed form

  void validate() const;
};

enum class IsoStage { ExactFamily, LeastSquares, BudgetExhausted };

const char* to_string(IsoStage s);

/// found = false means the search budget ran out; it is not a proof that the
/// algebras are non-isomorphic.
struct IsoResult {
  bool found = false;
  std::optional<BasisChange> witness;
  double residual = 0.0;
  IsoStage stage = IsoStage::BudgetExhausted;
};

struct IsoCheck {
  bool ok = false;
  double residual = 0.0;  // max(naturality residual, scaled |transform(A, P) - B|_max)
};

/// (P o P) M_A P^{-1} with no naturality or determinant screening.
Matrix transformed_matrix(const EvolutionAlgebra& a, const BasisChange& p);

/// Recomputes naturality and the structure identity from scratch.
/// Throws Singular when |det P| <= eps_det, DimensionError on shape mismatch.
IsoCheck verify_iso(const EvolutionAlgebra& a, const EvolutionAlgebra& b, const BasisChange& p,
                    const Tolerances& tol = {});

/// Exact stage only: tries every signed permutation and solves the diagonal
/// scaling from the monomial equations d_p^2 N_pq / d_q = B_pq in log space.
std::optional<BasisChange> monomial_iso(const EvolutionAlgebra& a, const EvolutionAlgebra& b,
                                        const Tolerances& tol = {});

/// Exact stage followed by seeded multi-start Levenberg-Marquardt on
/// naturality + (P o P) M_A - M_B P over the full matrix P.
IsoResult iso_search(const EvolutionAlgebra& a, const EvolutionAlgebra& b, const IsoOptions& opts = {},
                     const Tolerances& tol = {});

}  // namespace evo
