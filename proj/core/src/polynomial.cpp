#include "evo/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evo {

namespace {

double horner(std::span<const double> c, double t) {
  double v = 0.0;
  for (double x : c) v = v * t + x;
  return v;
}

double horner_derivative(std::span<const double> c, double t) {
  const std::size_t d = c.size() - 1;
  double v = 0.0;
  for (std::size_t i = 0; i < d; ++i) v = v * t + c[i] * static_cast<double>(d - i);
  return v;
}

double polish(std::span<const double> c, double t) {
  for (int it = 0; it < 50; ++it) {
    const double f = horner(c, t);
    const double df = horner_derivative(c, t);
    if (df == 0.0 || !std::isfinite(f)) break;
    const double next = t - f / df;
    if (!std::isfinite(next)) break;
    // Keep the Newton iterate only if it does not make things worse; near
    // multiple roots the derivative vanishes and steps can overshoot.
    if (std::abs(horner(c, next)) > std::abs(f)) break;
    const bool done = std::abs(next - t) <= 1e-16 * std::max(1.0, std::abs(t));
    t = next;
    if (done) break;
  }
  return t;
}

std::vector<double> merge_sorted(std::vector<double> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back()) <= 1e-9 * std::max(1.0, std::abs(r))) continue;
    out.push_back(r);
  }
  return out;
}

}  // namespace

double real_cbrt(double x) { return std::cbrt(x); }

std::vector<double> depressed_cubic_real_roots(double p, double q) {
  const double coeffs[] = {1.0, 0.0, p, q};
  std::vector<double> roots;
  if (p == 0.0) {
    roots.push_back(std::cbrt(-q));
  } else {
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);
    if (disc > 0.0) {
      // p < 0 here.
      const double m = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
    } else if (disc == 0.0) {
      roots.push_back(3.0 * q / p);
      roots.push_back(-1.5 * q / p);
    } else if (p < 0.0) {
      const double m = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::abs(q) * 3.0 / (-p * m);
      roots.push_back(-std::copysign(1.0, q) * m * std::cosh(std::acosh(std::max(1.0, arg)) / 3.0));
    } else {
      const double m = 2.0 * std::sqrt(p / 3.0);
      roots.push_back(-m * std::sinh(std::asinh(3.0 * q / (p * m)) / 3.0));
    }
  }
  for (double& r : roots) r = polish(coeffs, r);
  return merge_sorted(std::move(roots));
}

std::vector<double> polynomial_real_roots(std::span<const double> coeffs, double imag_tol) {
  std::size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
  const std::span<const double> c = coeffs.subspan(lead);
  if (c.size() <= 1) return {};
  const int d = static_cast<int>(c.size()) - 1;
  if (d == 1) return {-c[1] / c[0]};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) companion(0, j) = -c[j + 1] / c[0];
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto& ev = solver.eigenvalues();

  std::vector<double> roots;
  for (int i = 0; i < d; ++i) {
    const double re = ev(i).real();
    if (std::abs(ev(i).imag()) <= imag_tol * std::max(1.0, std::abs(ev(i)))) roots.push_back(polish(c, re));
  }
  return merge_sorted(std::move(roots));
}

}  // namespace evo
