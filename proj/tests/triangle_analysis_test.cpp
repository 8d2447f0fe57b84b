#include "corrclust/triangle_analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_util.hpp"

namespace corrclust {
namespace {

TEST(PivotCostTest, HandValues) {
  // Positive pair: disagreement iff exactly one endpoint attaches.
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::plus, 0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::plus, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::plus, 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::plus, 1.0, 0.6), 0.4);
  // Negative pair: disagreement iff both endpoints attach.
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::minus, 0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::minus, 0.6, 0.6), 0.16);
  EXPECT_DOUBLE_EQ(analysis::cost_given_pivot(Sign::minus, 1.0, 0.0), 0.0);
}

TEST(PivotCostTest, LpBudgetHandValues) {
  EXPECT_DOUBLE_EQ(analysis::lp_given_pivot(Sign::plus, 0.5, 1.0, 0.6), 0.2);
  EXPECT_DOUBLE_EQ(analysis::lp_given_pivot(Sign::minus, 1.0, 0.6, 0.6), 0.0);
  EXPECT_DOUBLE_EQ(analysis::lp_given_pivot(Sign::minus, 0.25, 0.0, 0.0),
                   0.75);
  // Nobody attaches: the pivot decides nothing and no budget is spent.
  EXPECT_DOUBLE_EQ(analysis::lp_given_pivot(Sign::plus, 0.7, 1.0, 1.0), 0.0);
}

TEST(TriangleAlgebraTest, WitnessTriple) {
  // Two positive wings at distance 1/2 closed by a co-located negative pair
  // is the configuration that pins the constant: ALG = 0.96, LP = 0.4.
  analysis::TriangleType ty{Sign::plus, Sign::plus, Sign::minus};
  analysis::AlgLp r = analysis::alg_lp_triangle(ty, 0.5, 0.5, 1.0);
  EXPECT_NEAR(r.alg, 0.96, 1e-15);
  EXPECT_NEAR(r.lp, 0.4, 1e-15);
  EXPECT_NEAR(analysis::alg_lp_ratio(ty, 0.5, 0.5, 1.0), 2.4, 1e-12);
  EXPECT_NEAR(analysis::c_function(ty, 0.5, 0.5, 1.0), 0.0, 1e-12);
}

TEST(TriangleAlgebraTest, RatioConventions) {
  analysis::TriangleType all_minus{Sign::minus, Sign::minus, Sign::minus};
  // All three pairs fully apart: zero cost over zero budget counts as 0.
  EXPECT_DOUBLE_EQ(analysis::alg_lp_ratio(all_minus, 1.0, 1.0, 1.0), 0.0);

  // Co-located positive wings with a far negative closure: every pivot
  // produces a disagreement but the LP spends nothing.
  analysis::TriangleType ty{Sign::plus, Sign::plus, Sign::minus};
  analysis::AlgLp r = analysis::alg_lp_triangle(ty, 0.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(r.lp, 0.0);
  EXPECT_GT(r.alg, 0.0);
  EXPECT_TRUE(std::isinf(analysis::alg_lp_ratio(ty, 0.0, 0.0, 1.0)));
  // That configuration violates the triangle inequality (c > a + b), which
  // is exactly why the feasible scan may exclude it.
}

TEST(TriangleAlgebraTest, GridScansStayUnderTheirFactors) {
  struct Scan {
    analysis::TriangleType ty;
    double factor;
    bool open_only;  // restrict to c <= a + b
  };
  const Scan scans[] = {
      {{Sign::plus, Sign::plus, Sign::minus}, 2.4, true},
      {{Sign::plus, Sign::plus, Sign::plus}, 2.4, false},
      {{Sign::plus, Sign::minus, Sign::minus}, 2.0, false},
      {{Sign::minus, Sign::minus, Sign::minus}, 1.0, false},
  };
  constexpr int kSteps = 21;
  for (const Scan& sc : scans) {
    double worst = -1e300;
    for (int ia = 0; ia < kSteps; ++ia)
      for (int ib = 0; ib < kSteps; ++ib)
        for (int ic = 0; ic < kSteps; ++ic) {
          double a = ia / 20.0, b = ib / 20.0, c = ic / 20.0;
          if (sc.open_only && a + b < c) continue;
          analysis::AlgLp r = analysis::alg_lp_triangle(sc.ty, a, b, c);
          worst = std::max(worst, r.alg - sc.factor * r.lp);
        }
    EXPECT_LE(worst, 1e-12);
    // The bound is tight: some grid point must come close to zero slack.
    EXPECT_GE(worst, -1e-6);
  }
}

TEST(DisagreementsTest, HandClusterings) {
  SignedGraph path = testutil::make_path(3);
  Clustering one;
  one.label = {0, 0, 0};
  // Both edges internal, one co-clustered negative pair.
  EXPECT_EQ(analysis::disagreements(path, one), 1u);
  Clustering singletons;
  singletons.label = {0, 1, 2};
  EXPECT_EQ(analysis::disagreements(path, singletons), 2u);
  Clustering split;
  split.label = {0, 0, 1};
  EXPECT_EQ(analysis::disagreements(path, split), 1u);

  SignedGraph k4 = testutil::make_complete(4);
  Clustering whole;
  whole.label = {0, 0, 0, 0};
  EXPECT_EQ(analysis::disagreements(k4, whole), 0u);

  SignedGraph planted = generate(GenKind::planted, 10, 0.0, 3, 2);
  Clustering truth;
  truth.label.resize(10);
  for (Vertex v = 0; v < 10; ++v)
    truth.label[v] = static_cast<std::uint32_t>(v * 2 / 10);
  EXPECT_EQ(analysis::disagreements(planted, truth), 0u);

  Clustering wrong_size;
  wrong_size.label = {0, 0};
  EXPECT_THROW(analysis::disagreements(path, wrong_size), std::logic_error);
}

TEST(LpObjectiveTest, SumsDistancesAndCloseness) {
  SignedGraph g = testutil::make_path(3);
  rounding::Assignment a;
  a.x_pos = {0.25, 0.5};
  EXPECT_DOUBLE_EQ(analysis::lp_objective(g, a), 0.75);
  a.x_neg.emplace(pair_key(0, 2), 0.7);  // pays 1 - 0.7
  EXPECT_DOUBLE_EQ(analysis::lp_objective(g, a), 0.75 + 0.3);
  // A negative pair at full distance is free, like the implicit ones.
  a.x_neg[pair_key(0, 2)] = 1.0;
  EXPECT_DOUBLE_EQ(analysis::lp_objective(g, a), 0.75);
}

TEST(PartialTriangleCheckTest, FeasibleAndViolatedAssignments) {
  SignedGraph g = testutil::make_path(3);
  rounding::Assignment a;
  a.x_pos = {0.5, 0.5};  // wings sum to 1 = default closing distance
  analysis::TriangleCheck ok = analysis::check_partial_triangle(g, a);
  EXPECT_TRUE(ok.ok);
  EXPECT_DOUBLE_EQ(ok.worst_violation, 0.0);

  rounding::Assignment bad;
  bad.x_pos = {0.0, 0.0};
  bad.x_neg.emplace(pair_key(0, 2), 1.0);
  analysis::TriangleCheck chk = analysis::check_partial_triangle(g, bad);
  EXPECT_FALSE(chk.ok);
  EXPECT_DOUBLE_EQ(chk.worst_violation, 1.0);
  EXPECT_EQ(chk.worst, (OpenTriangle{0, 1, 2}));

  // Tolerance is respected: a violation below tol still passes.
  bad.x_neg[pair_key(0, 2)] = 0.5e-13;
  bad.x_pos = {0.0, 0.0};
  EXPECT_TRUE(analysis::check_partial_triangle(g, bad, 1e-12).ok);
  EXPECT_FALSE(analysis::check_partial_triangle(g, bad, 1e-14).ok);
}

TEST(PartialTriangleCheckTest, ClosedTriplesAreIgnored) {
  SignedGraph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  rounding::Assignment a;
  a.x_pos = {0.0, 0.0, 1.0};  // would violate the inequality if checked
  EXPECT_TRUE(analysis::check_partial_triangle(tri, a).ok);
}

TEST(PartialTriangleCheckTest, BudgetGuard) {
  SignedGraph g = testutil::make_star(4000);
  rounding::Assignment a;
  a.x_pos.assign(g.num_edges(), 0.5);
  EXPECT_THROW(analysis::check_partial_triangle(g, a), BudgetError);
}

}  // namespace
}  // namespace corrclust
