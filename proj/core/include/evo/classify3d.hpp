#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evo/algebra.hpp"

namespace evo {

enum class Label3 { E1, E2, E3, E4, E5, E6, E7, E8, E9, E10, E11, E12, E13 };

inline constexpr std::array<Label3, 13> kAllLabels3{Label3::E1, Label3::E2,  Label3::E3,  Label3::E4, Label3::E5,
                                                    Label3::E6, Label3::E7,  Label3::E8,  Label3::E9, Label3::E10,
                                                    Label3::E11, Label3::E12, Label3::E13};

const char* to_string(Label3 l);
/// Accepts "E1".."E13"; throws InvalidParams otherwise.
Label3 parse_label3(std::string_view s);

/// The thirteen representatives for dim(E^2) = 1, entries in {-1, 0, 1}.
EvolutionAlgebra canonical3(Label3 l);

/// Pivot row e_1^2 = a1 e_1 + a2 e_2 + a3 e_3 with e_2^2 = c1 e_1^2 and
/// e_3^2 = c2 e_1^2, all read in the basis reordered by pivot_perm
/// (pivot_perm[p] is the old index of the new p-th basis vector).
struct CaseParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::array<int, 3> pivot_perm{0, 1, 2};
  double residual = 0.0;  // proportionality residual relative to the pivot row
};

/// The pivot is the first row whose max-norm is at least 1e-3 of the largest
/// row. Throws RankNotOne unless derived_dim(a) == 1.
CaseParams extract_case_params(const EvolutionAlgebra& a, const Tolerances& tol = {});

struct Classification3 {
  Label3 label = Label3::E1;
  BasisChange witness = BasisChange::identity(3);
  double residual = 0.0;
  bool verified = false;
  std::vector<std::string> trace;
};

/// Walks the case tree, validating every basis change in place. A rejected
/// step hands over to a closed-form natural basis plus an exact
/// signed-permutation snap, then to least-squares iso search.
/// Throws RankNotOne, or ClassificationFailed with the trace.
Classification3 classify3(const EvolutionAlgebra& a, const Tolerances& tol = {});

/// Rows (r, c1 r, c2 r). Each coordinate of r, c1, c2 is 0 with probability
/// 0.2, a non-zero integer in [-scale, scale] with probability 0.2 (when one
/// exists) and uniform on [-scale, scale] otherwise; r is redrawn until non-zero.
EvolutionAlgebra random_rank1_algebra(std::uint64_t seed, double scale = 3.0);

}  // namespace evo
