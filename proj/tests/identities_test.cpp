#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cholparam/ar1_sampling.hpp"
#include "cholparam/identities.hpp"
#include "cholparam/randcorr.hpp"
#include "test_support.hpp"

using namespace cholparam;
using cholparam::testing::cofactor_det;

namespace {

CorrelationMatrix randcorr(std::size_t n, std::uint64_t seed) {
  return generate(GeneratorConfig{n, seed}).matrix;
}

CorrelationMatrix identity(std::size_t n) { return CorrelationMatrix(SquareMatrix(Matrix::identity(n))); }

}  // namespace

TEST(Identities, ExactOnIdentity) {
  for (std::size_t n : {1u, 2u, 3u, 7u, 12u}) {
    const auto r = identity(n);
    EXPECT_EQ(verify_theorem1(r).max_residual, 0.0);
    EXPECT_EQ(verify_lemma1(r).max_residual, 0.0);
    EXPECT_EQ(verify_lemma2(r).max_residual, 0.0);
    EXPECT_EQ(verify_general_recursion(r).max_residual, 0.0);
  }
}

TEST(Identities, ReportNames) {
  const auto r = randcorr(4, 1);
  EXPECT_EQ(verify_theorem1(r).name, "theorem1");
  EXPECT_EQ(verify_lemma1(r).name, "lemma1");
  EXPECT_EQ(verify_lemma2(r).name, "lemma2");
  EXPECT_EQ(verify_general_recursion(r).name, "general_recursion");
}

TEST(Theorem1, TwoByTwoIsRhoSquared) {
  // i = 1, j = 2: Q_2(2, 2) = rho_12^2 and the single term is l_21^2.
  const CorrelationMatrix r{{1, 0.6}, {0.6, 1}};
  const auto chain = banachiewicz_chain(r);
  EXPECT_NEAR(quadratic_form(chain[0], r.prefix(2, 2), r.prefix(2, 2)), 0.36, 1e-16);
  EXPECT_LE(verify_theorem1(r).max_residual, 1e-16);
}

TEST(Lemma1, ThreeByThreeByHand) {
  const double a = 0.3, b = -0.2, c = 0.45;
  const CorrelationMatrix r{{1, a, b}, {a, 1, c}, {b, c, 1}};
  // i = 2, j = 3: Q_3(3, 3) from the explicit 2x2 inverse
  const double lhs = (b * b - 2 * a * b * c + c * c) / (1 - a * a);
  // Q_2(3, 3) + (rho_23 - Q_2(3, 2))^2 / (1 - Q_2(2, 2))
  const double rhs = b * b + (c - a * b) * (c - a * b) / (1 - a * a);
  EXPECT_NEAR(lhs, rhs, 1e-15);
  const auto chain = banachiewicz_chain(r);
  EXPECT_NEAR(quadratic_form(chain[1], r.prefix(3, 3), r.prefix(3, 3)), lhs, 1e-15);
  EXPECT_LE(verify_lemma1(r).max_residual, 1e-15);
}

TEST(Lemma2, Ar1CaseByHand) {
  // rho = 0.5, i = 2, j = 3: |R_2^{*3}|/|R_1| - |R_3|/|R_2| = 0.1875
  const auto r = ar1_matrix(Ar1Spec(3, 0.5));
  const double lhs = cofactor_det(bordered_matrix(r, 2, 3)) - cofactor_det(r.matrix()) / cofactor_det(r.leading(2));
  EXPECT_NEAR(lhs, 0.1875, 1e-15);
  const double num = 0.5 - 0.5 * 0.25;
  EXPECT_NEAR(num * num / 0.75, 0.1875, 1e-15);
  EXPECT_LE(verify_lemma2(r).max_residual, 1e-15);
}

TEST(Identities, RandomSeeds) {
  EXPECT_LE(verify_theorem1(randcorr(8, 17)).max_residual, 1e-10);
  EXPECT_LE(verify_lemma1(randcorr(10, 23)).max_residual, 1e-10);
  EXPECT_LE(verify_lemma2(randcorr(9, 31)).max_residual, 1e-10);
  EXPECT_LE(verify_general_recursion(randcorr(7, 41)).max_residual, 1e-10);
}

TEST(Identities, LocationReported) {
  const auto rep = verify_general_recursion(randcorr(6, 2));
  EXPECT_GE(rep.i, 1u);
  EXPECT_GT(rep.j, rep.i);
  EXPECT_GT(rep.l, rep.i);
  EXPECT_GE(rep.j, rep.l);
}

TEST(Identities, Lemma1IsGeneralRecursionAtLEqualsIPlusOne) {
  const auto r = randcorr(9, 8);
  const auto g = verify_general_recursion(r);
  const auto l1 = verify_lemma1(r);
  EXPECT_LE(l1.max_residual, g.max_residual + 1e-15);
}

TEST(Identities, Ar1Numerator) {
  for (double rho : {-0.8, -0.1, 0.0, 0.3, 0.9}) {
    const auto r = ar1_matrix(Ar1Spec(10, rho));
    EXPECT_LE(verify_ar1_numerator(r, rho).max_residual, 1e-12) << rho;
  }
  // a generic matrix does not satisfy it
  EXPECT_GT(verify_ar1_numerator(randcorr(5, 3), 0.5).max_residual, 1e-3);
}

TEST(OrderConditions, Identity) {
  const auto oc = check_order_conditions(identity(5));
  EXPECT_TRUE(oc.det_order_ok);
  EXPECT_TRUE(oc.ratio_order_ok);
  EXPECT_EQ(oc.minors, std::vector<double>(5, 1.0));
  EXPECT_EQ(oc.ladders.size(), 4u);
  EXPECT_EQ(oc.min_pivot, 1.0);
}

TEST(OrderConditions, Ar1) {
  const auto oc = check_order_conditions(ar1_matrix(Ar1Spec(4, 0.5)));
  EXPECT_TRUE(oc.det_order_ok);
  EXPECT_TRUE(oc.ratio_order_ok);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_NEAR(oc.minors[k - 1], std::pow(0.75, k - 1.0), 1e-15);
  EXPECT_NEAR(oc.min_pivot, 0.75, 1e-15);
}

TEST(OrderConditions, NotPositiveDefiniteFails) {
  const SquareMatrix m{{1, 0.9, -0.9}, {0.9, 1, 0.9}, {-0.9, 0.9, 1}};
  const auto oc = check_order_conditions(m);
  EXPECT_FALSE(oc.det_order_ok);
  EXPECT_FALSE(oc.ratio_order_ok);
  EXPECT_NEAR(oc.minors[2], cofactor_det(m.matrix()), 1e-14);
  EXPECT_LT(oc.minors[2], 0.0);
  EXPECT_LT(oc.min_pivot, 0.0);
}

TEST(OrderConditions, RejectsNonCorrelationInput) {
  EXPECT_THROW(check_order_conditions(SquareMatrix{{1, 0.2}, {0.3, 1}}), InvalidInput);
  EXPECT_THROW(check_order_conditions(SquareMatrix{{2, 0.2}, {0.2, 1}}), InvalidInput);
}

TEST(OrderConditions, LaddersAgreeWithCofactors) {
  const auto r = randcorr(6, 19);
  const auto oc = check_order_conditions(r);
  for (const auto& ladder : oc.ladders) {
    const std::size_t j = ladder.j;
    EXPECT_EQ(ladder.ratios.size(), j);
    EXPECT_EQ(ladder.ratios.front(), 1.0);
    for (std::size_t i = 2; i <= j; ++i) {
      const double num = cofactor_det(bordered_matrix(r, i, j));
      const double den = i == 2 ? 1.0 : cofactor_det(r.leading(i - 1));
      EXPECT_NEAR(ladder.ratios[i - 1], num / den, 1e-12);
    }
  }
}

// Properties.

TEST(IdentityProperties, ResidualsSmallUpTo15) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto r = randcorr(2 + seed % 14, 700 + seed);
    EXPECT_LE(verify_theorem1(r).max_residual, 1e-9);
    EXPECT_LE(verify_lemma1(r).max_residual, 1e-9);
    EXPECT_LE(verify_lemma2(r).max_residual, 1e-9);
    EXPECT_LE(verify_general_recursion(r).max_residual, 1e-9);
  }
}

TEST(IdentityProperties, LadderStepsAreNonNegativeOnPdInput) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = randcorr(2 + seed % 12, 900 + seed);
    const auto oc = check_order_conditions(r);
    EXPECT_TRUE(oc.det_order_ok);
    EXPECT_TRUE(oc.ratio_order_ok);
    for (const auto& ladder : oc.ladders)
      for (std::size_t k = 1; k < ladder.ratios.size(); ++k)
        EXPECT_GE(ladder.ratios[k - 1] - ladder.ratios[k], -1e-12);
  }
}

TEST(IdentityProperties, OrderConditionsMatchPositiveDefiniteness) {
  Rng rng(2024);
  std::size_t disagreements = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 6);
    const SquareMatrix m(cholparam::testing::random_unit_symmetric(n, rng));
    bool pd = true;
    try {
      reference_cholesky(m, Tolerances{});
    } catch (const NotPositiveDefinite&) {
      pd = false;
    }
    const auto oc = check_order_conditions(m);
    if (std::abs(oc.min_pivot) <= Tolerances{}.ord) continue;
    if (oc.det_order_ok != pd || oc.ratio_order_ok != pd) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0u);
}
