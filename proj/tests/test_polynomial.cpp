#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "evo/polynomial.hpp"

namespace evo {
namespace {

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (double x : c) v = v * t + x;
  return v;
}

TEST(Polynomial, CubicKnownRoots) {
  // (t - 1)(t - 2)(t + 3) = t^3 - 7t + 6
  const auto r = depressed_cubic_real_roots(-7.0, 6.0);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], -3.0, 1e-12);
  EXPECT_NEAR(r[1], 1.0, 1e-12);
  EXPECT_NEAR(r[2], 2.0, 1e-12);

  const auto one = depressed_cubic_real_roots(0.0, -1.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 1.0, 1e-15);

  // t^3 - 3t + 2 = (t - 1)^2 (t + 2)
  const auto dbl = depressed_cubic_real_roots(-3.0, 2.0);
  ASSERT_EQ(dbl.size(), 2u);
  EXPECT_NEAR(dbl[0], -2.0, 1e-12);
  EXPECT_NEAR(dbl[1], 1.0, 1e-6);
}

TEST(Polynomial, CubicRootCountMatchesDiscriminant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double p = u(rng);
    const double q = u(rng);
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);
    const auto roots = depressed_cubic_real_roots(p, q);
    if (std::abs(disc) < 1e-6) continue;
    EXPECT_EQ(roots.size(), disc > 0 ? 3u : 1u) << p << " " << q;
    for (double t : roots) EXPECT_LE(std::abs(t * t * t + p * t + q), 1e-10 * (1.0 + std::abs(t * t * t)));
  }
}

TEST(Polynomial, CompanionRootsOfQuartic) {
  // (t^2 - 2)(t - 1)(t + 0.5) = t^4 - 0.5 t^3 - 2.5 t^2 + t + 1
  const std::vector<double> c{1.0, -0.5, -2.5, 1.0, 1.0};
  const auto r = polynomial_real_roots(c);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_NEAR(r[0], -std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r[1], -0.5, 1e-12);
  EXPECT_NEAR(r[2], 1.0, 1e-12);
  EXPECT_NEAR(r[3], std::sqrt(2.0), 1e-12);
  for (double t : r) EXPECT_NEAR(horner(c, t), 0.0, 1e-12);
}

TEST(Polynomial, CompanionSkipsComplexRootsAndLeadingZeros) {
  // 0 t^3 + t^2 + 1 has no real roots; t^2 - 1 with a leading zero has two.
  EXPECT_TRUE(polynomial_real_roots(std::vector<double>{0.0, 1.0, 0.0, 1.0}).empty());
  const auto r = polynomial_real_roots(std::vector<double>{0.0, 1.0, 0.0, -1.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], -1.0, 1e-14);
  EXPECT_NEAR(r[1], 1.0, 1e-14);
}

TEST(Polynomial, RealCubeRootKeepsSign) {
  EXPECT_DOUBLE_EQ(real_cbrt(-8.0), -2.0);
  EXPECT_DOUBLE_EQ(real_cbrt(27.0), 3.0);
  EXPECT_EQ(real_cbrt(0.0), 0.0);
}

}  // namespace
}  // namespace evo
