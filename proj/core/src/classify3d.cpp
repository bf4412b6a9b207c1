#include "evo/classify3d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <utility>

#include "evo/iso.hpp"
#include "evo/rank_one.hpp"

namespace evo {

namespace {

constexpr int kMaxReentries = 3;
constexpr double kPivotFloor = 1e-3;

Matrix rows3(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(3, 3);
  int i = 0;
  for (const auto& r : rows) {
    int k = 0;
    for (double v : r) m(i, k++) = v;
    ++i;
  }
  return m;
}

Matrix first_column(double x, double y, double z) { return rows3({{x, 0, 0}, {y, 0, 0}, {z, 0, 0}}); }

BasisChange diag3(double x, double y, double z) { return BasisChange::diagonal(Vector(Eigen::Vector3d(x, y, z))); }

BasisChange perm3(int a, int b, int c) {
  const std::array<int, 3> p{a, b, c};
  return BasisChange::permutation(p);
}

double sign(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Case parameters with the pivot fixed at row 0 of the current basis.
CaseParams params_at_row0(const EvolutionAlgebra& a) {
  const RankOneView view = rank_one_view(a, 0);
  CaseParams p;
  p.a1 = view.direction(0);
  p.a2 = view.direction(1);
  p.a3 = view.direction(2);
  p.c1 = view.weights(1);
  p.c2 = view.weights(2);
  p.residual = view.residual;
  return p;
}

class Walker {
 public:
  Walker(const EvolutionAlgebra& input, const Tolerances& tol)
      : input_(input), tol_(tol), current_(input), total_(BasisChange::identity(3)) {}

  std::optional<Label3> run(const std::array<int, 3>& pivot_perm);

  const BasisChange& total() const { return total_; }
  std::vector<std::string>& trace() { return trace_; }

 private:
  bool zero(double v, double scale) const { return std::abs(v) <= tol_.eps_sign * scale; }

  // Applies p to the current algebra after checking invertibility, naturality,
  // the optional expected matrix and the accumulated identity from the input.
  bool step(const BasisChange& p, const std::string& tag, const std::optional<Matrix>& expected = std::nullopt);

  std::optional<Label3> snap(std::initializer_list<Label3> preferred, const std::string& tag);
  std::optional<Label3> case1(const CaseParams& p);
  std::optional<Label3> case2(const CaseParams& p);

  const EvolutionAlgebra& input_;
  Tolerances tol_;
  EvolutionAlgebra current_;
  BasisChange total_;
  std::vector<std::string> trace_;
  bool reenter_ = false;
};

bool Walker::step(const BasisChange& p, const std::string& tag, const std::optional<Matrix>& expected) {
  const auto reject = [&](const char* why) {
    trace_.push_back(tag + ":rejected(" + why + ")");
    return false;
  };
  if (!(std::abs(p.det()) > tol_.eps_det)) return reject("singular");
  if (!is_natural_change(current_, p, tol_)) return reject("not-natural");
  const Matrix next = transformed_matrix(current_, p);
  if (!next.allFinite()) return reject("non-finite");
  const EvolutionAlgebra next_alg(3, next);
  if (expected && !algebras_equal(next_alg, EvolutionAlgebra(3, *expected), tol_)) return reject("unexpected-matrix");
  const BasisChange composed = compose_changes(p, total_);
  if (!(std::abs(composed.det()) > tol_.eps_det) || !verify_iso(input_, next_alg, composed, tol_).ok) {
    return reject("accumulated");
  }
  current_ = next_alg;
  total_ = composed;
  trace_.push_back(tag);
  return true;
}

std::optional<Label3> Walker::snap(std::initializer_list<Label3> preferred, const std::string& tag) {
  std::vector<Label3> order(preferred);
  for (Label3 l : kAllLabels3) {
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  }
  for (Label3 l : order) {
    if (auto q = monomial_iso(current_, canonical3(l), tol_)) {
      if (step(*q, tag + ":snap:" + to_string(l), canonical3(l).matrix())) return l;
    }
  }
  return std::nullopt;
}

std::optional<Label3> Walker::run(const std::array<int, 3>& pivot_perm) {
  if (pivot_perm[0] != 0 && !step(BasisChange::permutation(pivot_perm), "pivot")) return std::nullopt;
  for (int entries = 0; entries <= kMaxReentries; ++entries) {
    reenter_ = false;
    const CaseParams p = params_at_row0(current_);
    const double wscale = std::max({std::abs(p.a1), std::abs(p.a2), std::abs(p.a3)});
    std::optional<Label3> out = zero(p.a1, wscale) ? case2(p) : case1(p);
    if (!reenter_) return out;
  }
  throw ClassificationFailed("case tree exceeded " + std::to_string(kMaxReentries) + " re-entries", trace_);
}

std::optional<Label3> Walker::case1(const CaseParams& p0) {
  trace_.push_back("1");
  if (!zero(p0.a1 - 1.0, 1.0) && !step(diag3(1.0 / p0.a1, 1.0, 1.0), "1:normalize")) return std::nullopt;
  const CaseParams p = params_at_row0(current_);
  const double a2 = p.a2;
  const double a3 = p.a3;
  const double c1 = p.c1;
  const double c2 = p.c2;
  const double wscale = std::max({1.0, std::abs(a2), std::abs(a3)});
  const double x = a2 * a2 * c1;
  const double y = a3 * a3 * c2;
  const double s = 1.0 + x + y;
  const double t = 1.0 + y;
  const double q = 1.0 + x;

  if (zero(s, 1.0 + std::abs(x) + std::abs(y))) {
    trace_.push_back("1.1");
    if (!zero(t, 1.0 + std::abs(y))) {
      trace_.push_back("1.1.1");
      if (!zero(a3, wscale)) {
        trace_.push_back("1.1.1.1");
        if (!step(diag3(1.0, a2, a3), "1.1.1.1:scale")) return std::nullopt;
        if (zero(c2, 1.0)) {
          if (!step(BasisChange(rows3({{0, 1, 0}, {1, 0, 1}, {0, 0, 1}})), "1.1.1.1:c2=0")) return std::nullopt;
          return snap({Label3::E1}, "1.1.1.1");
        }
        const double u = y;
        const double tt = 1.0 + u;
        const double d = u * u * u + 2.0 * u * u + u;
        const BasisChange pd(rows3({{(1 + d) / (2 * tt), (-1 + d) / (2 * tt), (1 + d) / (2 * tt)},
                                    {(-1 + d) / (2 * tt), (1 + d) / (2 * tt), (-1 + d) / (2 * tt)},
                                    {-u, 0, 1}}));
        if (step(pd, "1.1.1.1:D", canonical3(Label3::E2).matrix())) return Label3::E2;
        return std::nullopt;
      }
      const std::string tag = zero(c2, 1.0) ? "1.1.1.2:c2=0" : c2 > 0 ? "1.1.1.2:c2>0" : "1.1.1.2:c2<0";
      trace_.push_back("1.1.1.2");
      const double d3 = zero(c2, 1.0) ? 1.0 : 1.0 / std::sqrt(std::abs(c2));
      if (!step(diag3(1.0, a2, d3), tag)) return std::nullopt;
      const Label3 l = zero(c2, 1.0) ? Label3::E1 : c2 > 0 ? Label3::E2 : Label3::E3;
      if (algebras_equal(current_, canonical3(l), tol_)) return l;
      return snap({l}, "1.1.1.2");
    }
    trace_.push_back(zero(c1, 1.0) ? (zero(a2, wscale) ? "1.1.2.2" : "1.1.2.3") : "1.1.2.1");
    if (!step(perm3(0, 2, 1), "1.1.2:swap(e2,e3)")) return std::nullopt;
    reenter_ = true;
    return std::nullopt;
  }

  trace_.push_back("1.2");
  const bool z1 = zero(c1, 1.0);
  const bool z2 = zero(c2, 1.0);
  if (z1 && z2) {
    trace_.push_back("1.2.1");
    if (step(BasisChange(rows3({{1, a2, a3}, {0, 1, 1}, {0, 2, 1}})), "1.2.1:basis", canonical3(Label3::E4).matrix())) {
      return Label3::E4;
    }
    return std::nullopt;
  }
  if (z1) {
    trace_.push_back("1.2.2");
    if (!step(BasisChange(rows3({{1, a2, a3}, {0, 1, 0}, {-a3 * c2, 1, 1}})), "1.2.2:basis",
              first_column(s, 0, c2 * s))) {
      return std::nullopt;
    }
    const std::string tag = c2 > 0 ? "1.2.2.1" : "1.2.2.2";
    const Label3 l = c2 > 0 ? Label3::E5 : Label3::E6;
    if (step(diag3(1.0 / s, 1.0, 1.0 / (std::sqrt(std::abs(c2)) * s)), tag, canonical3(l).matrix())) return l;
    return std::nullopt;
  }
  if (z2) {
    trace_.push_back("1.2.8");
    if (!step(perm3(0, 2, 1), "1.2.8:swap(e2,e3)")) return std::nullopt;
    reenter_ = true;
    return std::nullopt;
  }
  if (zero(q, 1.0 + std::abs(x))) {
    trace_.push_back("1.2.7");
    const BasisChange normal = rank_one_normal_basis(current_, tol_);
    if (!step(normal, "1.2.7:normal-basis")) return std::nullopt;
    return snap({Label3::E8}, "1.2.7");
  }

  std::string tag;
  if (c1 > 0) {
    tag = c2 > 0 ? "1.2.3" : s > 0 ? "1.2.4.1" : "1.2.4.2";
  } else {
    tag = std::string(c2 > 0 ? "1.2.5" : "1.2.6") + (q > 0 ? ".1" : ".2") + (s > 0 ? ".1" : ".2");
  }
  trace_.push_back(tag);
  const BasisChange first(rows3({{1, a2, a3}, {-a2 * c1, 1, 0}, {-a3 * c2 / q, -a3 * a2 * c2 / q, 1}}));
  if (!step(first, tag + ":first-stage", first_column(s, c1 * q, c2 * s / q))) return std::nullopt;
  const double sigma2 = sign(c1 * q * s);
  const double sigma3 = sign(c2 * q);
  const Label3 l = sigma2 > 0 ? (sigma3 > 0 ? Label3::E7 : Label3::E8) : (sigma3 > 0 ? Label3::E10 : Label3::E9);
  const BasisChange second =
      diag3(1.0 / s, 1.0 / std::sqrt(std::abs(c1 * q * s)), std::sqrt(std::abs(q)) / (std::sqrt(std::abs(c2)) * s));
  if (step(second, tag + ":second-stage", canonical3(l).matrix())) return l;
  return std::nullopt;
}

std::optional<Label3> Walker::case2(const CaseParams& p0) {
  trace_.push_back("2");
  const double wscale0 = std::max(std::abs(p0.a2), std::abs(p0.a3));
  if (zero(p0.a2, wscale0)) {
    if (!step(perm3(0, 2, 1), "2:swap(e2,e3)")) return std::nullopt;
  }
  const CaseParams p = params_at_row0(current_);
  const double wscale = std::max(std::abs(p.a2), std::abs(p.a3));
  if (!zero(p.c1, 1.0)) {
    trace_.push_back("2.1");
    if (!step(perm3(1, 2, 0), "2.1:permute")) return std::nullopt;
    reenter_ = true;
    return std::nullopt;
  }
  trace_.push_back("2.2");
  if (!zero(p.c2, 1.0) && !zero(p.a3, wscale)) {
    trace_.push_back("2.2.1");
    if (!step(perm3(2, 1, 0), "2.2.1:permute")) return std::nullopt;
    reenter_ = true;
    return std::nullopt;
  }
  trace_.push_back("2.2.2");
  if (zero(p.c2, 1.0)) {
    trace_.push_back("2.2.2.1");
    if (step(BasisChange(rows3({{0, p.a2, p.a3}, {0, 0, 1.0 / p.a2}, {1, 0, 0}})), "2.2.2.1:basis",
             canonical3(Label3::E11).matrix())) {
      return Label3::E11;
    }
    return std::nullopt;
  }
  const Label3 l = p.c2 > 0 ? Label3::E12 : Label3::E13;
  const std::string tag = p.c2 > 0 ? "2.2.2.2" : "2.2.2.3";
  trace_.push_back(tag);
  if (step(BasisChange(rows3({{0, p.a2, 0}, {1, 0, 0}, {0, 0, 1.0 / std::sqrt(std::abs(p.c2))}})), tag + ":basis",
           canonical3(l).matrix())) {
    return l;
  }
  return std::nullopt;
}

// Closed-form natural basis from the input, exact snap, then least squares.
std::optional<std::pair<Label3, BasisChange>> fallback(const EvolutionAlgebra& a, const Tolerances& tol,
                                                       std::vector<std::string>& trace) {
  try {
    const BasisChange normal = rank_one_normal_basis(a, tol);
    if (std::abs(normal.det()) > tol.eps_det && is_natural_change(a, normal, tol)) {
      const EvolutionAlgebra mid(3, transformed_matrix(a, normal));
      for (Label3 l : kAllLabels3) {
        if (auto q = monomial_iso(mid, canonical3(l), tol)) {
          const BasisChange total = compose_changes(*q, normal);
          if (verify_iso(a, canonical3(l), total, tol).ok) {
            trace.push_back(std::string("fallback:normal-basis:snap:") + to_string(l));
            return std::make_pair(l, total);
          }
        }
      }
    }
  } catch (const Error&) {
  }
  for (Label3 l : kAllLabels3) {
    const IsoResult r = iso_search(a, canonical3(l), IsoOptions{}, tol);
    if (r.found) {
      trace.push_back(std::string("fallback:iso-search:") + to_string(l));
      return std::make_pair(l, *r.witness);
    }
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(Label3 l) {
  static constexpr const char* kNames[] = {"E1", "E2", "E3", "E4",  "E5",  "E6", "E7",
                                           "E8", "E9", "E10", "E11", "E12", "E13"};
  return kNames[static_cast<int>(l)];
}

Label3 parse_label3(std::string_view s) {
  for (Label3 l : kAllLabels3) {
    if (s == to_string(l)) return l;
  }
  throw InvalidParams("unknown 3D label '" + std::string(s) + "'");
}

EvolutionAlgebra canonical3(Label3 l) {
  switch (l) {
    case Label3::E1:
      return EvolutionAlgebra(3, rows3({{1, 1, 0}, {-1, -1, 0}, {0, 0, 0}}));
    case Label3::E2:
      return EvolutionAlgebra(3, rows3({{1, 1, 0}, {-1, -1, 0}, {1, 1, 0}}));
    case Label3::E3:
      return EvolutionAlgebra(3, rows3({{1, 1, 0}, {-1, -1, 0}, {-1, -1, 0}}));
    case Label3::E4:
      return EvolutionAlgebra(3, first_column(1, 0, 0));
    case Label3::E5:
      return EvolutionAlgebra(3, first_column(1, 0, 1));
    case Label3::E6:
      return EvolutionAlgebra(3, first_column(1, 0, -1));
    case Label3::E7:
      return EvolutionAlgebra(3, first_column(1, 1, 1));
    case Label3::E8:
      return EvolutionAlgebra(3, first_column(1, 1, -1));
    case Label3::E9:
      return EvolutionAlgebra(3, first_column(1, -1, -1));
    case Label3::E10:
      return EvolutionAlgebra(3, first_column(1, -1, 1));
    case Label3::E11:
      return EvolutionAlgebra(3, first_column(0, 0, 1));
    case Label3::E12:
      return EvolutionAlgebra(3, first_column(0, 1, 1));
    case Label3::E13:
      break;
  }
  return EvolutionAlgebra(3, first_column(0, 1, -1));
}

CaseParams extract_case_params(const EvolutionAlgebra& a, const Tolerances& tol) {
  if (a.dim() != 3) throw DimensionError("extract_case_params needs a 3-dimensional algebra");
  if (derived_dim(a, tol) != 1) throw RankNotOne("dim(E^2) must be 1");
  const Matrix& m = a.matrix();
  Vector norms(3);
  for (int i = 0; i < 3; ++i) norms(i) = m.row(i).cwiseAbs().maxCoeff();
  int pivot = 0;
  while (norms(pivot) < kPivotFloor * norms.maxCoeff()) ++pivot;

  std::array<int, 3> perm{0, 1, 2};
  std::swap(perm[0], perm[pivot]);
  const EvolutionAlgebra moved = pivot == 0 ? a : transform(a, BasisChange::permutation(perm), tol);
  CaseParams p = params_at_row0(moved);
  p.pivot_perm = perm;
  if (p.residual > tol.eps_residual * 1e2) throw RankNotOne("rows are not proportional to the pivot row");
  return p;
}

Classification3 classify3(const EvolutionAlgebra& a, const Tolerances& tol) {
  tol.validate();
  if (a.dim() != 3) throw DimensionError("classify3 needs a 3-dimensional algebra");
  if (derived_dim(a, tol) != 1) throw RankNotOne("classify3 requires dim(E^2) = 1");

  const auto done = [&](Label3 l, const BasisChange& w, std::vector<std::string> trace) {
    const IsoCheck check = verify_iso(a, canonical3(l), w, tol);
    return Classification3{l, w, check.residual, check.ok, std::move(trace)};
  };

  for (Label3 l : kAllLabels3) {
    if (algebras_equal(a, canonical3(l), tol)) return done(l, BasisChange::identity(3), {"already-canonical"});
  }

  const CaseParams params = extract_case_params(a, tol);
  Walker walker(a, tol);
  std::optional<Label3> label;
  try {
    label = walker.run(params.pivot_perm);
  } catch (const ClassificationFailed&) {
    throw;
  } catch (const Error& e) {
    walker.trace().push_back(std::string("error:") + e.what());
  }

  if (label) {
    Classification3 c = done(*label, walker.total(), walker.trace());
    if (c.verified) return c;
    walker.trace().push_back("final-check-failed");
  }
  std::vector<std::string> trace = walker.trace();
  if (auto fb = fallback(a, tol, trace)) return done(fb->first, fb->second, std::move(trace));
  throw ClassificationFailed("no verified witness for any of the thirteen forms", std::move(trace));
}

EvolutionAlgebra random_rank1_algebra(std::uint64_t seed, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidParams("scale must be positive and finite");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  const int top = static_cast<int>(std::floor(scale));
  const auto draw = [&]() {
    const double kind = unit(rng);
    if (kind < 0.2) return 0.0;
    if (kind < 0.4 && top >= 1) {
      std::uniform_int_distribution<int> pick(1, top);
      const int v = pick(rng);
      return unit(rng) < 0.5 ? -static_cast<double>(v) : static_cast<double>(v);
    }
    return uniform(rng);
  };
  Vector r(3);
  do {
    for (int i = 0; i < 3; ++i) r(i) = draw();
  } while (r.cwiseAbs().maxCoeff() == 0.0);
  const double c1 = draw();
  const double c2 = draw();
  Matrix m(3, 3);
  m.row(0) = r.transpose();
  m.row(1) = c1 * r.transpose();
  m.row(2) = c2 * r.transpose();
  return EvolutionAlgebra(3, m);
}

}  // namespace evo
