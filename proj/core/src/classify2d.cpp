#include "evo/classify2d.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "evo/iso.hpp"
#include "evo/polynomial.hpp"
#include "evo/rank_one.hpp"

namespace evo {

namespace {

constexpr double kCoordinateFloor = 1e-9;

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

BasisChange swap2() {
  const std::array<int, 2> perm{1, 0};
  return BasisChange::permutation(perm);
}

Classification2 finish(const EvolutionAlgebra& a, const Class2& cls, const BasisChange& witness,
                       const Tolerances& tol) {
  const IsoCheck check = verify_iso(a, canonical2(cls), witness, tol);
  if (!check.ok) {
    throw ClassificationFailed("2D witness for " + describe(cls) + " failed verification (residual " +
                               std::to_string(check.residual) + ")");
  }
  return Classification2{cls, witness, check.residual, true};
}

Classification2 classify_rank_two(const EvolutionAlgebra& a, const Tolerances& tol) {
  Matrix m = a.matrix();
  const double zero = tol.eps_sign * m.cwiseAbs().maxCoeff();
  BasisChange pre = BasisChange::identity(2);
  const bool z11 = std::abs(m(0, 0)) <= zero;
  const bool z22 = std::abs(m(1, 1)) <= zero;

  if (!z11 && !z22) {
    const Vector d = Vector(Eigen::Vector2d(1.0 / m(0, 0), 1.0 / m(1, 1)));
    const double b2 = m(0, 1) * m(1, 1) / (m(0, 0) * m(0, 0));
    const double b3 = m(1, 0) * m(0, 0) / (m(1, 1) * m(1, 1));
    BasisChange witness = BasisChange::diagonal(d);
    Class2 cls = Class2::e6(b2, b3);
    const Class2 canon = canonicalize(cls);
    if (canon.params != cls.params) witness = compose_changes(swap2(), witness);
    return finish(a, canon, witness, tol);
  }

  // E7 path: move the non-zero diagonal entry (if any) to position (2, 2).
  if (!z11 && z22) {
    pre = swap2();
    m = transform(a, pre, tol).matrix();
  }
  const double d1 = real_cbrt(1.0 / (m(0, 1) * m(0, 1) * m(1, 0)));
  const double d2 = d1 * d1 * m(0, 1);
  const double a4 = z11 && z22 ? 0.0 : d2 * m(1, 1);
  const BasisChange scale = BasisChange::diagonal(Vector(Eigen::Vector2d(d1, d2)));
  return finish(a, Class2::e7(a4), compose_changes(scale, pre), tol);
}

Classification2 classify_rank_one(const EvolutionAlgebra& a, const Tolerances& tol) {
  static constexpr std::array<Label2, 5> kOrder{Label2::E1, Label2::E2, Label2::E3, Label2::E4, Label2::E5};
  for (Label2 l : kOrder) {
    const EvolutionAlgebra target = canonical2(Class2::plain(l));
    if (algebras_equal(a, target, tol)) return finish(a, Class2::plain(l), BasisChange::identity(2), tol);
  }

  std::optional<BasisChange> normal;
  try {
    normal = rank_one_normal_basis(a, tol);
  } catch (const Error&) {
    normal.reset();
  }
  if (normal && std::abs(normal->det()) > tol.eps_det && is_natural_change(a, *normal, tol)) {
    const EvolutionAlgebra mid(2, transformed_matrix(a, *normal));
    for (Label2 l : kOrder) {
      if (auto snap = monomial_iso(mid, canonical2(Class2::plain(l)), tol)) {
        const BasisChange total = compose_changes(*snap, *normal);
        if (verify_iso(a, canonical2(Class2::plain(l)), total, tol).ok) return finish(a, Class2::plain(l), total, tol);
      }
    }
  }

  IsoOptions opts;
  for (Label2 l : kOrder) {
    const IsoResult r = iso_search(a, canonical2(Class2::plain(l)), opts, tol);
    if (r.found) return finish(a, Class2::plain(l), *r.witness, tol);
  }
  throw ClassificationFailed("no 2D canonical form with dim(E^2) = 1 matched within the search budget");
}

}  // namespace

const char* to_string(Label2 l) {
  switch (l) {
    case Label2::E1:
      return "E1";
    case Label2::E2:
      return "E2";
    case Label2::E3:
      return "E3";
    case Label2::E4:
      return "E4";
    case Label2::E5:
      return "E5";
    case Label2::E6:
      return "E6";
    case Label2::E7:
      return "E7";
    case Label2::Zero:
      break;
  }
  return "Zero";
}

Label2 parse_label2(std::string_view s) {
  for (Label2 l : {Label2::E1, Label2::E2, Label2::E3, Label2::E4, Label2::E5, Label2::E6, Label2::E7, Label2::Zero}) {
    if (s == to_string(l)) return l;
  }
  throw InvalidParams("unknown 2D label '" + std::string(s) + "'");
}

Class2 Class2::plain(Label2 l) {
  if (l == Label2::E6 || l == Label2::E7) throw InvalidParams(std::string(to_string(l)) + " needs parameters");
  return Class2{l, {}};
}

Class2 Class2::e6(double a2, double a3) { return Class2{Label2::E6, {a2, a3}}; }

Class2 Class2::e7(double a4) { return Class2{Label2::E7, {a4}}; }

void Class2::validate(const Tolerances& tol) const {
  const std::size_t want = label == Label2::E6 ? 2 : label == Label2::E7 ? 1 : 0;
  if (params.size() != want) throw InvalidParams(std::string(to_string(label)) + ": wrong number of parameters");
  for (double p : params) {
    if (!std::isfinite(p)) throw InvalidParams("non-finite class parameter");
  }
  if (label == Label2::E6 && std::abs(1.0 - params[0] * params[1]) <= tol.eps_sign) {
    throw InvalidParams("E6 requires 1 - a2*a3 != 0");
  }
}

Class2 canonicalize(const Class2& c) {
  if (c.label != Label2::E6 || c.params.size() != 2) return c;
  if (c.params[1] < c.params[0]) return Class2::e6(c.params[1], c.params[0]);
  return c;
}

bool same_class(const Class2& a, const Class2& b, double param_tol) {
  if (a.label != b.label) return false;
  const Class2 ca = canonicalize(a);
  const Class2 cb = canonicalize(b);
  if (ca.params.size() != cb.params.size()) return false;
  for (std::size_t i = 0; i < ca.params.size(); ++i) {
    if (std::abs(ca.params[i] - cb.params[i]) > param_tol) return false;
  }
  return true;
}

std::string describe(const Class2& c) {
  std::ostringstream os;
  os << to_string(c.label);
  if (!c.params.empty()) {
    os << '(';
    for (std::size_t i = 0; i < c.params.size(); ++i) os << (i ? "," : "") << c.params[i];
    os << ')';
  }
  return os.str();
}

EvolutionAlgebra canonical2(const Class2& c) {
  c.validate();
  switch (c.label) {
    case Label2::E1:
      return EvolutionAlgebra(2, mat2(1, 0, 0, 0));
    case Label2::E2:
      return EvolutionAlgebra(2, mat2(1, 0, 1, 0));
    case Label2::E3:
      return EvolutionAlgebra(2, mat2(1, 1, -1, -1));
    case Label2::E4:
      return EvolutionAlgebra(2, mat2(0, 1, 0, 0));
    case Label2::E5:
      return EvolutionAlgebra(2, mat2(0, 1, 0, -1));
    case Label2::E6:
      return EvolutionAlgebra(2, mat2(1, c.params[0], c.params[1], 1));
    case Label2::E7:
      return EvolutionAlgebra(2, mat2(0, 1, 1, c.params[0]));
    case Label2::Zero:
      break;
  }
  return EvolutionAlgebra(2, Matrix::Zero(2, 2));
}

Classification2 classify2(const EvolutionAlgebra& a, const Tolerances& tol) {
  tol.validate();
  if (a.dim() != 2) throw DimensionError("classify2 needs a 2-dimensional algebra");
  switch (derived_dim(a, tol)) {
    case 0:
      return finish(a, Class2::plain(Label2::Zero), BasisChange::identity(2), tol);
    case 1:
      return classify_rank_one(a, tol);
    default:
      return classify_rank_two(a, tol);
  }
}

Class2 predicted_iso(const Class2& c, const Vector& x) {
  c.validate();
  if (x.size() != 2) throw DimensionError("predicted_iso needs a 2-vector");
  switch (c.label) {
    case Label2::E1:
    case Label2::E2:
    case Label2::E5:
      return Class2::plain(Label2::E1);
    case Label2::E6:
    case Label2::E7: {
      if (std::abs(x(0)) < kCoordinateFloor || std::abs(x(1)) < kCoordinateFloor) {
        throw DivisionByNearZero("fixed point has a coordinate below 1e-9; prediction formula undefined");
      }
      const double ratio = x(1) / x(0);
      if (c.label == Label2::E6) return canonicalize(Class2::e6(c.params[1] * ratio * ratio, c.params[0] / (ratio * ratio)));
      return Class2::e7(c.params[0] * real_cbrt(ratio * ratio));
    }
    default:
      break;
  }
  throw NoFixedPoint(std::string(to_string(c.label)) + " has no non-zero fixed point");
}

TableRow table2d(const Class2& c, const SolverOptions& opts, const Tolerances& tol) {
  const EvolutionAlgebra a = canonical2(c);
  const FixedPointReport report = fixed_points(a, opts, tol);
  TableRow row;
  row.cls = c;
  row.complete = report.complete;
  row.notes = report.notes;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    TableEntry e;
    e.fixed_point = report.points[i];
    e.residual = report.residuals[i];
    e.jacobian = jacobian_algebra(a, e.fixed_point);
    try {
      e.classification = classify2(e.jacobian, tol);
    } catch (const ClassificationFailed& err) {
      e.error = err.what();
    }
    try {
      e.prediction = predicted_iso(c, e.fixed_point);
    } catch (const Error& err) {
      if (e.error.empty()) e.error = err.what();
    }
    e.matches_prediction = e.classification && e.prediction && same_class(e.classification->cls, *e.prediction);
    row.entries.push_back(std::move(e));
  }
  return row;
}

}  // namespace evo
