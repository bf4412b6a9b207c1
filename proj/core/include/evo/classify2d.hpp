#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evo/algebra.hpp"
#include "evo/dynamics.hpp"

namespace evo {

enum class Label2 { E1, E2, E3, E4, E5, E6, E7, Zero };

const char* to_string(Label2 l);
/// Accepts "E1".."E7" and "Zero"; throws InvalidParams otherwise.
Label2 parse_label2(std::string_view s);

/// params holds (a2, a3) for E6, (a4) for E7 and nothing otherwise.
struct Class2 {
  Label2 label = Label2::Zero;
  std::vector<double> params;

  static Class2 plain(Label2 l);
  static Class2 e6(double a2, double a3);
  static Class2 e7(double a4);

  void validate(const Tolerances& tol = {}) const;
};

/// E6(a2, a3) ~ E6(a3, a2): returns the lexicographically smaller ordering.
Class2 canonicalize(const Class2& c);

/// Same label and canonical parameters within `param_tol`.
bool same_class(const Class2& a, const Class2& b, double param_tol = 1e-6);

std::string describe(const Class2& c);

struct Classification2 {
  Class2 cls;
  BasisChange witness = BasisChange::identity(2);
  double residual = 0.0;
  bool verified = false;
};

EvolutionAlgebra canonical2(const Class2& c);

/// transform(a, witness) == canonical2(cls) on success; ClassificationFailed
/// when no candidate verifies.
Classification2 classify2(const EvolutionAlgebra& a, const Tolerances& tol = {});

/// Class of the Jacobian algebra at a non-zero fixed point of canonical2(c).
/// Throws NoFixedPoint for E3, E4 and Zero, DivisionByNearZero when an E6/E7
/// formula would divide by a coordinate below 1e-9 in magnitude.
Class2 predicted_iso(const Class2& c, const Vector& fixed_point);

struct TableEntry {
  Vector fixed_point;
  double residual = 0.0;
  EvolutionAlgebra jacobian = EvolutionAlgebra(2, Matrix::Zero(2, 2));
  std::optional<Classification2> classification;
  std::optional<Class2> prediction;
  bool matches_prediction = false;
  std::string error;  // why classification or prediction is missing
};

struct TableRow {
  Class2 cls;
  std::vector<TableEntry> entries;
  bool complete = false;
  std::vector<std::string> notes;
};

TableRow table2d(const Class2& c, const SolverOptions& opts = {}, const Tolerances& tol = {});

}  // namespace evo
