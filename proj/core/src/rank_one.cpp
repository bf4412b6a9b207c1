#include "evo/rank_one.hpp"

#include <cmath>
#include <vector>

namespace evo {

namespace {

Vector unit(int n, int i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

Vector cross(const Vector& a, const Vector& b) {
  Vector c(3);
  c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
  return c;
}

int argmax_abs(const Vector& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  return best;
}

double form_scale(const Vector& u, const Vector& x) { return (u.cwiseAbs().array() * x.array().square()).sum(); }

// Basis of {x : B(w, x) = 0} that is pairwise B-orthogonal.
std::vector<Vector> orthogonal_complement(const Vector& u, const Vector& w, double eps) {
  const int n = static_cast<int>(w.size());
  const Vector ell = u.cwiseProduct(w);
  const int j = argmax_abs(ell);
  std::vector<Vector> g;
  for (int a = 0; a < n; ++a) {
    if (a == j) continue;
    g.push_back(unit(n, a) - (ell(a) / ell(j)) * unit(n, j));
  }
  if (g.size() < 2) return g;

  auto small = [&](const Vector& x, double v) { return std::abs(v) <= eps * std::max(form_scale(u, x), 1e-300); };
  double b11 = bilinear(u, g[0], g[0]);
  double b22 = bilinear(u, g[1], g[1]);
  if (small(g[0], b11) && !small(g[1], b22)) {
    std::swap(g[0], g[1]);
    std::swap(b11, b22);
  }
  if (small(g[0], b11)) {
    const double b12 = bilinear(u, g[0], g[1]);
    const double cross_scale = std::sqrt(form_scale(u, g[0]) * form_scale(u, g[1]));
    if (std::abs(b12) <= eps * cross_scale) return g;  // B vanishes on the complement
    g[0] = g[0] + g[1];
    b11 = bilinear(u, g[0], g[0]);
  }
  g[1] = g[1] - (bilinear(u, g[0], g[1]) / b11) * g[0];
  return g;
}

}  // namespace

double bilinear(const Vector& weights, const Vector& x, const Vector& y) {
  return (weights.array() * x.array() * y.array()).sum();
}

RankOneView rank_one_view(const EvolutionAlgebra& a, std::optional<int> pivot) {
  const Matrix& m = a.matrix();
  const int n = a.dim();
  Vector norms(n);
  for (int i = 0; i < n; ++i) norms(i) = m.row(i).cwiseAbs().maxCoeff();
  const double top = norms.maxCoeff();
  if (top == 0.0) throw RankNotOne("zero algebra has no pivot row");

  int p = 0;
  if (pivot) {
    p = *pivot;
    if (p < 0 || p >= n || norms(p) == 0.0) throw RankNotOne("requested pivot row is zero");
  } else {
    while (norms(p) < top * (1.0 - 1e-12)) ++p;
  }

  RankOneView view;
  view.pivot = p;
  view.direction = m.row(p).transpose();
  const double ww = view.direction.squaredNorm();
  view.weights.resize(n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    view.weights(i) = i == p ? 1.0 : m.row(i).dot(view.direction.transpose()) / ww;
    const double err = (m.row(i).transpose() - view.weights(i) * view.direction).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
  }
  view.residual = worst / norms(p);
  return view;
}

BasisChange rank_one_normal_basis(const EvolutionAlgebra& a, const Tolerances& tol) {
  const RankOneView view = rank_one_view(a);
  if (view.residual > tol.eps_residual * 1e2) throw RankNotOne("rows are not proportional");
  const int n = a.dim();
  const Vector& u = view.weights;
  const Vector& w = view.direction;
  const double umax = u.cwiseAbs().maxCoeff();
  const Vector ell = u.cwiseProduct(w);
  const double s = bilinear(u, w, w);
  const double eps = tol.eps_sign;

  std::vector<Vector> rows;
  if (ell.cwiseAbs().maxCoeff() <= eps * umax * w.cwiseAbs().maxCoeff()) {
    // w lies in the radical of B.
    std::vector<int> radical;
    std::vector<int> live;
    for (int i = 0; i < n; ++i) (std::abs(u(i)) > eps * umax ? live : radical).push_back(i);
    int keep = -1;
    for (int i : radical) {
      if (keep < 0 || std::abs(w(i)) > std::abs(w(keep))) keep = i;
    }
    rows.push_back(w);
    for (int i : radical) {
      if (i != keep) rows.push_back(unit(n, i));
    }
    for (int i : live) rows.push_back(unit(n, i) / std::sqrt(std::abs(u(i))));
  } else if (std::abs(s) > eps * form_scale(u, w)) {
    rows.push_back(w / s);
    for (const Vector& g : orthogonal_complement(u, w, eps)) {
      const double b = bilinear(u, g, g);
      rows.push_back(std::abs(b) > eps * form_scale(u, g) ? Vector(g / std::sqrt(std::abs(b * s))) : g);
    }
  } else {
    // Isotropic w outside the radical.
    const int j = argmax_abs(ell);
    const Vector z = unit(n, j) - (u(j) / (2.0 * ell(j))) * w;
    const double beta = ell(j) / 2.0;  // B(f1, f1) for f1 = (w + z) / 2
    rows.push_back((w + z) / (2.0 * beta));
    rows.push_back((w - z) / (2.0 * beta));
    if (n == 3) {
      Vector f3 = cross(u.cwiseProduct(w), u.cwiseProduct(z));
      f3 /= f3.cwiseAbs().maxCoeff();
      const double gamma = bilinear(u, f3, f3);
      if (std::abs(gamma) > eps * form_scale(u, f3)) f3 /= std::sqrt(std::abs(gamma * beta));
      rows.push_back(f3);
    }
  }

  if (static_cast<int>(rows.size()) != n) throw Singular("could not complete a natural basis");
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) p.row(i) = rows[i].transpose();
  return BasisChange(p);
}

}  // namespace evo
