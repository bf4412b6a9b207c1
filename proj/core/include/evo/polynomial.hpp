#pragma once

#include <span>
#include <vector>

namespace evo {

/// Real roots of t^3 + p t + q = 0 by the trigonometric / hyperbolic form of
/// Cardano's method, each polished by Newton and returned in ascending order.
/// Roots closer than 1e-9 (relative) are merged.
std::vector<double> depressed_cubic_real_roots(double p, double q);

/// Real roots of c[0] t^d + c[1] t^(d-1) + ... + c[d] from the eigenvalues of
/// the companion matrix. Eigenvalues with |Im| <= imag_tol * max(1, |z|) are
/// kept, Newton-polished against the polynomial, sorted ascending and merged.
/// Leading zero coefficients are stripped.
std::vector<double> polynomial_real_roots(std::span<const double> coeffs, double imag_tol = 1e-7);

/// Real cube root preserving sign.
double real_cbrt(double x);

}  // namespace evo
