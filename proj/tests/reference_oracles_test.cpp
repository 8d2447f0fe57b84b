#include "corrclust/reference_oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "corrclust/triangle_analysis.hpp"
#include "test_util.hpp"

namespace corrclust {
namespace {

TEST(BruteForceOptTest, FrozenSmallInstances) {
  EXPECT_EQ(oracles::brute_force_opt(testutil::make_path(3)), 1u);
  EXPECT_EQ(oracles::brute_force_opt(testutil::make_path(4)), 1u);
  EXPECT_EQ(oracles::brute_force_opt(testutil::make_cycle(5)), 3u);
  EXPECT_EQ(oracles::brute_force_opt(testutil::make_complete(4)), 0u);
  EXPECT_EQ(oracles::brute_force_opt(testutil::make_star(3)), 2u);
  // Triangle with a pendant: keep the triangle, cut the pendant edge.
  SignedGraph pendant(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  EXPECT_EQ(oracles::brute_force_opt(pendant), 1u);
  // Noiseless planted instances are perfectly clusterable.
  EXPECT_EQ(oracles::brute_force_opt(generate(GenKind::planted, 8, 0.0, 5)),
            0u);
  EXPECT_EQ(
      oracles::brute_force_opt(generate(GenKind::planted, 9, 0.0, 5, 3)), 0u);
  // Degenerate sizes.
  EXPECT_EQ(oracles::brute_force_opt(SignedGraph(0, {})), 0u);
  EXPECT_EQ(oracles::brute_force_opt(SignedGraph(1, {})), 0u);
  EXPECT_EQ(oracles::brute_force_opt(SignedGraph(2, {{0, 1}})), 0u);
}

TEST(BruteForceOptTest, NeverAboveSimpleClusterings) {
  for (int i = 0; i < 10; ++i) {
    std::uint64_t s = hash2(0x0b57ULL, i);
    SignedGraph g = generate(GenKind::gnp_signed, 9, 0.4, s);
    std::uint64_t opt = oracles::brute_force_opt(g);
    Clustering singletons, whole;
    for (Vertex v = 0; v < 9; ++v) {
      singletons.label.push_back(v);
      whole.label.push_back(0);
    }
    EXPECT_LE(opt, analysis::disagreements(g, singletons));
    EXPECT_LE(opt, analysis::disagreements(g, whole));
  }
}

TEST(BruteForceOptTest, InvariantUnderRelabeling) {
  for (int i = 0; i < 5; ++i) {
    std::uint64_t s = hash2(0x9e1bULL, i);
    SignedGraph g = generate(GenKind::gnp_signed, 9, 0.45, s);
    std::vector<Vertex> perm(9);
    for (Vertex v = 0; v < 9; ++v) perm[v] = (v * 4 + 3) % 9;  // a bijection
    std::vector<Edge> mapped;
    for (const Edge& e : g.edges()) {
      Vertex u = perm[e.u], v = perm[e.v];
      mapped.push_back({std::min(u, v), std::max(u, v)});
    }
    SignedGraph h(9, mapped);
    EXPECT_EQ(oracles::brute_force_opt(g), oracles::brute_force_opt(h));
  }
}

TEST(BruteForceOptTest, BudgetGuards) {
  SignedGraph big = generate(GenKind::gnp_signed, 13, 0.5, 1);
  EXPECT_THROW(oracles::brute_force_opt(big), BudgetError);
  oracles::OracleBudget tiny;
  tiny.max_states = 1;
  EXPECT_THROW(oracles::brute_force_opt(testutil::make_path(4), tiny),
               BudgetError);
}

TEST(ExactExpectedCostTest, DeterministicAssignments) {
  SignedGraph k3 = testutil::make_complete(3);
  rounding::Assignment a;
  a.x_pos.assign(3, 0.0);  // everything kept: one cluster, zero cost
  EXPECT_DOUBLE_EQ(oracles::exact_expected_cost(k3, a), 0.0);
  a.x_pos.assign(3, 1.0);  // nothing kept: singletons cut all three edges
  EXPECT_DOUBLE_EQ(oracles::exact_expected_cost(k3, a), 3.0);

  // A kept path clusters as {0,1,2} or pivot-split, but always at cost 1.
  SignedGraph path = testutil::make_path(3);
  rounding::Assignment b;
  b.x_pos.assign(2, 0.0);
  EXPECT_DOUBLE_EQ(oracles::exact_expected_cost(path, b), 1.0);
}

TEST(ExactExpectedCostTest, SingleCoinHandValue) {
  // Edge (0,1) survives with probability 1 - f_plus(0.5) = 0.4 and then
  // costs 1 (the cut edge (1,2)); otherwise singletons cost 2.
  SignedGraph path = testutil::make_path(3);
  rounding::Assignment a;
  a.x_pos = {0.5, 1.0};
  EXPECT_NEAR(oracles::exact_expected_cost(path, a), 0.4 * 1 + 0.6 * 2, 1e-12);
}

TEST(ExactExpectedCostTest, MatchesMonteCarloRounding) {
  for (int i = 0; i < 3; ++i) {
    std::uint64_t s = hash2(0xe5c7ULL, i);
    Vertex n = static_cast<Vertex>(4 + i % 2);
    SignedGraph g = generate(GenKind::gnp_signed, n, 0.5, s);
    rounding::Assignment a;
    a.x_pos.resize(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      a.x_pos[e] = uniform01(hash3(s, 0xe1ULL, e));
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v))
          a.x_neg.emplace(pair_key(u, v),
                          uniform01(hash3(s, 0xe2ULL, pair_key(u, v))));

    double exact = oracles::exact_expected_cost(g, a);
    const int trials = 200000;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      Clustering c = rounding::round_assignment(g, a, hash2(s, t));
      sum += static_cast<double>(analysis::disagreements(g, c));
    }
    // Costs live in [0, 10], so the empirical mean sits within ~0.03 of the
    // expectation at four standard errors.
    EXPECT_NEAR(sum / trials, exact, 0.05) << "instance " << i;
  }
}

TEST(ExactExpectedCostTest, BudgetGuards) {
  SignedGraph big = testutil::make_complete(7);
  rounding::Assignment a;
  a.x_pos.assign(big.num_edges(), 0.0);
  EXPECT_THROW(oracles::exact_expected_cost(big, a), BudgetError);

  SignedGraph k6 = testutil::make_complete(6);
  rounding::Assignment frac;
  frac.x_pos.assign(k6.num_edges(), 0.5);  // 15 live coins > the cap
  EXPECT_THROW(oracles::exact_expected_cost(k6, frac), BudgetError);
}

engine::LengthView unit_view(double limit_log) {
  engine::LengthView v;
  v.limit_log = limit_log;
  return v;
}

TEST(VerifyMaximalTest, AcceptsValidSetsAndEmptySets) {
  SignedGraph star = testutil::make_star(4);
  engine::LengthView v = unit_view(std::log(3.3));
  engine::TriangleSet s = engine::greedy_maximal(star, v);
  EXPECT_TRUE(oracles::verify_maximal(star, v, s).ok);

  SignedGraph path = testutil::make_path(3);
  engine::TriangleSet empty;
  // Nothing is eligible at the boundary limit, so empty is maximal there.
  EXPECT_TRUE(oracles::verify_maximal(path, unit_view(std::log(3.0)), empty)
                  .ok);
  oracles::VerifyResult r =
      oracles::verify_maximal(path, unit_view(std::log(3.3)), empty);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.reason.find("not maximal"), std::string::npos);
}

TEST(VerifyMaximalTest, DetectsMissingMember) {
  SignedGraph star = testutil::make_star(4);
  engine::LengthView v = unit_view(std::log(3.3));
  engine::TriangleSet s = engine::greedy_maximal(star, v);
  ASSERT_EQ(s.triangles.size(), 2u);
  engine::TriangleSet dropped;
  dropped.triangles = {s.triangles[0]};
  dropped.used_pos_edges = {s.used_pos_edges[0], s.used_pos_edges[1]};
  dropped.used_neg_pairs = {s.used_neg_pairs[0]};
  oracles::VerifyResult r = oracles::verify_maximal(star, v, dropped);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.reason.find("not maximal"), std::string::npos);
}

TEST(VerifyMaximalTest, DetectsDoubleUse) {
  SignedGraph star = testutil::make_star(3);
  engine::LengthView v = unit_view(std::log(3.3));
  engine::TriangleSet s;
  s.triangles = {{1, 0, 2}, {1, 0, 3}};  // share the positive edge (0,1)
  s.used_pos_edges = {0, 1, 0, 2};
  s.used_neg_pairs = {pair_key(1, 2), pair_key(1, 3)};
  oracles::VerifyResult r = oracles::verify_maximal(star, v, s);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.reason.find("positive edge is used twice"), std::string::npos);

  // Two centers closing over the same negative pair.
  SignedGraph db(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  engine::TriangleSet t;
  t.triangles = {{1, 0, 2}, {1, 3, 2}};
  t.used_pos_edges = {
      static_cast<std::uint32_t>(db.edge_index(0, 1)),
      static_cast<std::uint32_t>(db.edge_index(0, 2)),
      static_cast<std::uint32_t>(db.edge_index(1, 3)),
      static_cast<std::uint32_t>(db.edge_index(2, 3))};
  t.used_neg_pairs = {pair_key(1, 2), pair_key(1, 2)};
  oracles::VerifyResult r2 = oracles::verify_maximal(db, v, t);
  EXPECT_FALSE(r2.ok);
  EXPECT_NE(r2.reason.find("negative pair is used twice"), std::string::npos);
}

TEST(VerifyMaximalTest, DetectsIneligibleMemberAndBadBookkeeping) {
  SignedGraph star = testutil::make_star(3);
  engine::TriangleSet s;
  s.triangles = {{1, 0, 2}};
  s.used_pos_edges = {0, 1};
  s.used_neg_pairs = {pair_key(1, 2)};

  // Too tight a limit makes the member ineligible.
  oracles::VerifyResult r1 =
      oracles::verify_maximal(star, unit_view(std::log(3.0)), s);
  EXPECT_FALSE(r1.ok);
  EXPECT_NE(r1.reason.find("ineligible"), std::string::npos);

  // A pre-marked edge does too.
  std::vector<std::uint8_t> marked(star.num_edges(), 0);
  marked[0] = 1;
  engine::LengthView v = unit_view(std::log(3.3));
  v.marked_pos = &marked;
  EXPECT_FALSE(oracles::verify_maximal(star, v, s).ok);

  // Used lists that disagree with the triangles are rejected.
  engine::TriangleSet bad = s;
  bad.used_pos_edges = {0, 2};
  oracles::VerifyResult r3 =
      oracles::verify_maximal(star, unit_view(std::log(3.3)), bad);
  EXPECT_FALSE(r3.ok);
  EXPECT_NE(r3.reason.find("does not match"), std::string::npos);
}

SignedGraph petersen() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.push_back({i, static_cast<Vertex>((i + 1) % 5)});       // outer
    edges.push_back({static_cast<Vertex>(5 + i),
                     static_cast<Vertex>(5 + (i + 2) % 5)});      // inner
    edges.push_back({i, static_cast<Vertex>(5 + i)});             // spokes
  }
  for (Edge& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  return SignedGraph(10, edges);
}

TEST(TriangleReductionTest, TriangleFreeGraphsNeverFire) {
  // One-sided error: a positive answer always comes from a real triangle,
  // so these must return false on every seed.
  SignedGraph empty(5, {});
  std::vector<Edge> bip;
  for (Vertex i = 0; i < 3; ++i)
    for (Vertex j = 3; j < 6; ++j) bip.push_back({i, j});
  SignedGraph k33(6, bip);
  SignedGraph pet = petersen();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_FALSE(oracles::triangle_detect_reduction(empty, seed));
    EXPECT_FALSE(oracles::triangle_detect_reduction(k33, seed));
    EXPECT_FALSE(oracles::triangle_detect_reduction(pet, seed));
  }
}

TEST(TriangleReductionTest, TrianglesAreAlmostAlwaysFound) {
  SignedGraph k4 = testutil::make_complete(4);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    if (oracles::triangle_detect_reduction(k4, seed)) ++hits;
  // Each repetition misses with probability < 5/8; at eight or more
  // repetitions per call, 45 of 50 is a very loose floor.
  EXPECT_GE(hits, 45);

  // A lone triangle in a larger sparse graph.
  SignedGraph g(8, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {5, 6}, {6, 7}});
  hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    if (oracles::triangle_detect_reduction(g, seed)) ++hits;
  EXPECT_GE(hits, 45);
}

TEST(TriangleReductionTest, RepetitionCountScalesWithSize) {
  std::uint64_t reps = 0;
  oracles::triangle_detect_reduction(SignedGraph(2, {{0, 1}}), 0, &reps);
  EXPECT_EQ(reps, 8u);  // the floor dominates tiny graphs
  oracles::triangle_detect_reduction(SignedGraph(200, {{0, 1}}), 0, &reps);
  EXPECT_EQ(reps, 23u);  // ceil-ish of 2 ln 200 / ln(8/5)
}

}  // namespace
}  // namespace corrclust
