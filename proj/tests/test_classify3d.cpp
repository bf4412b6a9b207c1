#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "evo/classify3d.hpp"
#include "evo/iso.hpp"
#include "support.hpp"

namespace evo {
namespace {

using test::rows;
using test::vec;

EvolutionAlgebra from_params(const Vector& a, double c1, double c2) {
  Matrix m(3, 3);
  m.row(0) = a.transpose();
  m.row(1) = c1 * a.transpose();
  m.row(2) = c2 * a.transpose();
  return EvolutionAlgebra(3, m);
}

bool visited(const Classification3& c, const std::string& tag) {
  return std::find(c.trace.begin(), c.trace.end(), tag) != c.trace.end();
}

void expect_sound(const EvolutionAlgebra& a, const Classification3& c) {
  ASSERT_TRUE(c.verified);
  EXPECT_TRUE(is_natural_change(a, c.witness));
  EXPECT_TRUE(
      algebras_equal(EvolutionAlgebra(3, test::reference_transform(a.matrix(), c.witness.rows())), canonical3(c.label)));
}

TEST(Classify3, CanonicalExamples) {
  EXPECT_EQ(canonical3(Label3::E4).matrix(), rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(canonical3(Label3::E13).matrix(), rows({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}));
  EXPECT_EQ(canonical3(Label3::E3).matrix(), rows({{1, 1, 0}, {-1, -1, 0}, {-1, -1, 0}}));
  for (Label3 l : kAllLabels3) {
    EXPECT_EQ(derived_dim(canonical3(l)), 1);
    EXPECT_EQ(parse_label3(to_string(l)), l);
  }
  EXPECT_THROW(parse_label3("E14"), InvalidParams);
}

TEST(Classify3, ExtractParamsExamples) {
  const CaseParams p = extract_case_params(EvolutionAlgebra(3, rows({{1, 2, 0}, {-0.25, -0.5, 0}, {1, 2, 0}})));
  EXPECT_EQ(p.a1, 1.0);
  EXPECT_EQ(p.a2, 2.0);
  EXPECT_EQ(p.a3, 0.0);
  EXPECT_DOUBLE_EQ(p.c1, -0.25);
  EXPECT_DOUBLE_EQ(p.c2, 1.0);
  EXPECT_EQ(p.pivot_perm, (std::array<int, 3>{0, 1, 2}));

  // Pivot row 3 moves first; coefficients are read in the reordered basis.
  const CaseParams q = extract_case_params(EvolutionAlgebra(3, rows({{0, 0, 0}, {0, 0, 0}, {5, 0, 0}})));
  EXPECT_EQ(q.pivot_perm[0], 2);
  EXPECT_EQ(q.a1, 0.0);
  EXPECT_EQ(q.a2, 0.0);
  EXPECT_EQ(q.a3, 5.0);
  EXPECT_EQ(q.c1, 0.0);
  EXPECT_EQ(q.c2, 0.0);

  const CaseParams r = extract_case_params(EvolutionAlgebra(3, rows({{1, 1, 1}, {2, 2, 2}, {3, 3, 3}})));
  EXPECT_EQ(r.a1, 1.0);
  EXPECT_DOUBLE_EQ(r.c1, 2.0);
  EXPECT_DOUBLE_EQ(r.c2, 3.0);

  EXPECT_THROW(extract_case_params(EvolutionAlgebra(3, Matrix::Identity(3, 3))), RankNotOne);
  EXPECT_THROW(extract_case_params(EvolutionAlgebra(3, Matrix::Zero(3, 3))), RankNotOne);
}

TEST(Classify3, AlreadyCanonical) {
  const Classification3 c = classify3(canonical3(Label3::E2));
  EXPECT_EQ(c.label, Label3::E2);
  EXPECT_EQ(c.witness.rows(), Matrix::Identity(3, 3));
  EXPECT_EQ(c.trace, std::vector<std::string>{"already-canonical"});

  const Classification3 e8 = classify3(EvolutionAlgebra(3, rows({{1, 0, 0}, {1, 0, 0}, {-1, 0, 0}})));
  EXPECT_EQ(e8.label, Label3::E8);
  EXPECT_EQ(e8.witness.rows(), Matrix::Identity(3, 3));
}

TEST(Classify3, IdempotentOnEveryForm) {
  for (Label3 l : kAllLabels3) EXPECT_EQ(classify3(canonical3(l)).label, l);
}

TEST(Classify3, ScaledThirdVectorGivesE2) {
  const EvolutionAlgebra a(3, rows({{1, 2, 0}, {-0.25, -0.5, 0}, {1, 2, 0}}));
  const Classification3 c = classify3(a);
  EXPECT_EQ(c.label, Label3::E2);
  EXPECT_TRUE(visited(c, "1.1.1.2"));
  EXPECT_LE(test::max_abs_diff(c.witness.rows(), rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 1}})), 1e-15);
  expect_sound(a, c);
}

TEST(Classify3, ZeroPivotCoefficientGivesE12) {
  const EvolutionAlgebra a(3, rows({{0, 3, 0}, {0, 0, 0}, {0, 6, 0}}));
  // {3 e2, e1, e3 / sqrt 2} by hand.
  const Matrix hand = rows({{0, 3, 0}, {1, 0, 0}, {0, 0, 1 / std::sqrt(2.0)}});
  EXPECT_LE(test::max_abs_diff(test::reference_transform(a.matrix(), hand), canonical3(Label3::E12).matrix()), 1e-15);
  const Classification3 c = classify3(a);
  EXPECT_EQ(c.label, Label3::E12);
  EXPECT_TRUE(visited(c, "2.2.2.2"));
  expect_sound(a, c);
}

struct BranchCase {
  const char* name;
  Vector a;
  double c1;
  double c2;
  const char* tag;
  std::vector<Label3> labels;
};

TEST(Classify3, EveryBranchOfTheCaseTree) {
  const std::vector<BranchCase> cases = {
      {"displayed P, c2 > 0", vec({1, 1, 1}), -2, 1, "1.1.1.1:D", {Label3::E2}},
      {"displayed P, c2 < 0", vec({1, 1, 1}), -0.5, -0.5, "1.1.1.1:D", {Label3::E2}},
      {"c2 = 0 row swap", vec({1, 1, 1}), -1, 0, "1.1.1.1:snap:E1", {Label3::E1}},
      {"a3 = 0, c2 < 0", vec({1, 2, 0}), -0.25, -1, "1.1.1.2", {Label3::E3}},
      {"a3 = 0, c2 = 0", vec({2, 2, 0}), -1, 0, "1.1.1.2", {Label3::E1}},
      {"swap, c1 != 0", vec({1, 0, 1}), 2, -1, "1.1.2.1", {Label3::E2, Label3::E3}},
      {"swap, c1 = 0, a2 = 0", vec({1, 0, 1}), 0, -1, "1.1.2.2", {Label3::E1}},
      {"swap, c1 = 0, a2 != 0", vec({1, 1, 1}), 0, -1, "1.1.2.3", {Label3::E1}},
      {"c1 = c2 = 0", vec({2, -1, 3}), 0, 0, "1.2.1", {Label3::E4}},
      {"c1 = 0, c2 > 0", vec({2, -1, 3}), 0, 0.5, "1.2.2.1", {Label3::E5}},
      {"c1 = 0, c2 < 0", vec({2, -1, 3}), 0, -0.5, "1.2.2.2", {Label3::E6}},
      {"c1, c2 > 0", vec({1, 1, 1}), 1, 2, "1.2.3", {Label3::E7}},
      {"c1 > 0, c2 < 0, s > 0", vec({1, 1, 1}), 1, -1, "1.2.4.1", {Label3::E8}},
      {"c1 > 0, c2 < 0, s < 0", vec({1, 1, 1}), 1, -3, "1.2.4.2", {Label3::E9}},
      {"c1 < 0, c2 > 0, q > 0, s > 0", vec({1, 0.5, 1}), -1, 1, "1.2.5.1.1", {Label3::E10}},
      {"c1 < 0, c2 > 0, q < 0, s > 0", vec({1, 1, 1}), -2, 2, "1.2.5.2.1", {Label3::E8}},
      {"c1 < 0, c2 > 0, q < 0, s < 0", vec({1, 1, 1}), -3, 1, "1.2.5.2.2", {Label3::E9}},
      {"c1 < 0, c2 < 0, q > 0, s > 0", vec({1, 0.5, 0.5}), -1, -1, "1.2.6.1.1", {Label3::E9}},
      {"c1 < 0, c2 < 0, q > 0, s < 0", vec({1, 0.5, 1}), -1, -1, "1.2.6.1.2", {Label3::E8}},
      {"c1 < 0, c2 < 0, q < 0", vec({1, 1, 1}), -2, -1, "1.2.6.2.2", {Label3::E10}},
      {"1 + a2^2 c1 = 0", vec({1, 1, 1}), -1, 1, "1.2.7", {Label3::E8}},
      {"c2 = 0, c1 != 0", vec({1, 1, 1}), 1, 0, "1.2.8", {Label3::E5}},
      {"a1 = 0, c1 != 0", vec({0, 1, 2}), 1, 0, "2.1", {Label3::E5}},
      {"a1 = 0, a2 = 0", vec({0, 0, 2}), 0, 1, "2:swap(e2,e3)", {Label3::E5}},
      {"a1 = 0, c2 a3 != 0", vec({0, 1, 2}), 0, 1, "2.2.1", {Label3::E5}},
      {"a1 = 0, c2 = 0", vec({0, 2, 3}), 0, 0, "2.2.2.1", {Label3::E11}},
      {"a1 = 0, c2 < 0", vec({0, 3, 0}), 0, -2, "2.2.2.3", {Label3::E13}},
  };
  for (const BranchCase& bc : cases) {
    SCOPED_TRACE(bc.name);
    const EvolutionAlgebra a = from_params(bc.a, bc.c1, bc.c2);
    const Classification3 c = classify3(a);
    EXPECT_TRUE(visited(c, bc.tag)) << "trace misses " << bc.tag;
    EXPECT_NE(std::find(bc.labels.begin(), bc.labels.end(), c.label), bc.labels.end()) << to_string(c.label);
    for (const std::string& t : c.trace) EXPECT_EQ(t.find("fallback"), std::string::npos) << t;
    expect_sound(a, c);
  }
}

TEST(Classify3, CanonicalListHasTwoCoincidentPairs) {
  // Hand-built signed permutations: E3 -> E2 and E10 -> E8.
  const BasisChange p23(rows({{0, -1, 0}, {-1, 0, 0}, {0, 0, 1}}));
  EXPECT_TRUE(verify_iso(canonical3(Label3::E3), canonical3(Label3::E2), p23).ok);
  const BasisChange p108(rows({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
  EXPECT_TRUE(verify_iso(canonical3(Label3::E10), canonical3(Label3::E8), p108).ok);
}

Label3 merge_coincident(Label3 l) {
  if (l == Label3::E3) return Label3::E2;
  if (l == Label3::E10) return Label3::E8;
  return l;
}

TEST(Classify3, ConjugationInvariance) {
  std::mt19937_64 rng(2718);
  for (Label3 l : kAllLabels3) {
    for (int k = 0; k < 100; ++k) {
      const EvolutionAlgebra a(3, transformed_matrix(canonical3(l), test::random_monomial(rng, 3)));
      const Classification3 c = classify3(a);
      EXPECT_EQ(merge_coincident(c.label), merge_coincident(l));
      expect_sound(a, c);
    }
  }
}

TEST(Classify3, InvariantUnderDenseNaturalChanges) {
  // For x * y = B(x, y) w, rows that are pairwise B-orthogonal form a natural basis.
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    const EvolutionAlgebra a = random_rank1_algebra(trial, 3.0);
    Matrix g(3, 3);
    for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = u(rng);
    // Weights of B are the row multipliers against row 0.
    const CaseParams p = extract_case_params(a);
    if (p.pivot_perm[0] != 0) continue;
    const Vector b = vec({1.0, p.c1, p.c2});
    if (std::abs(b(0) * b(1) * b(2)) < 1e-3) continue;
    // B-orthogonalize g's rows (Gram-Schmidt in the indefinite form, skipping degenerate draws).
    bool ok = true;
    for (int r = 0; r < 3 && ok; ++r) {
      for (int s = 0; s < r; ++s) {
        const double gss = (b.array() * g.row(s).transpose().array().square()).sum();
        if (std::abs(gss) < 1e-2) {
          ok = false;
          break;
        }
        const double grs = (b.array() * g.row(r).transpose().array() * g.row(s).transpose().array()).sum();
        g.row(r) -= (grs / gss) * g.row(s);
      }
    }
    if (!ok || std::abs(g.determinant()) < 1e-2) continue;
    const BasisChange change(g);
    if (!is_natural_change(a, change)) continue;
    const EvolutionAlgebra moved = transform(a, change);
    const Classification3 ca = classify3(a);
    const Classification3 cm = classify3(moved);
    EXPECT_EQ(merge_coincident(ca.label), merge_coincident(cm.label));
    expect_sound(moved, cm);
    ++checked;
  }
  EXPECT_GE(checked, 50);
}

TEST(Classify3, FuzzTotality) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const EvolutionAlgebra a = random_rank1_algebra(seed, 3.0);
    ASSERT_EQ(derived_dim(a), 1) << seed;
    const Classification3 c = classify3(a);
    expect_sound(a, c);
  }
}

TEST(Classify3, GeneratorIsDeterministic) {
  EXPECT_EQ(random_rank1_algebra(0).matrix(), random_rank1_algebra(0).matrix());
  EXPECT_NE(random_rank1_algebra(0).matrix(), random_rank1_algebra(1).matrix());
  EXPECT_THROW(random_rank1_algebra(0, 0.0), InvalidParams);
  bool saw_zero_rows = false;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Matrix m = random_rank1_algebra(s).matrix();
    if (m.row(1).isZero(0) && m.row(2).isZero(0)) saw_zero_rows = true;
  }
  EXPECT_TRUE(saw_zero_rows);
}

TEST(Classify3, RejectsWrongRank) {
  EXPECT_THROW(classify3(EvolutionAlgebra(3, Matrix::Zero(3, 3))), RankNotOne);
  EXPECT_THROW(classify3(EvolutionAlgebra(3, Matrix::Identity(3, 3))), RankNotOne);
  EXPECT_THROW(classify3(EvolutionAlgebra(2, Matrix::Identity(2, 2))), DimensionError);
}

}  // namespace
}  // namespace evo
