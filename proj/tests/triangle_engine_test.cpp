#include "corrclust/triangle_engine.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "corrclust/reference_oracles.hpp"
#include "test_util.hpp"

namespace corrclust {
namespace {

engine::LengthView unit_view(double limit_log) {
  engine::LengthView v;
  v.limit_log = limit_log;
  return v;
}

TEST(TriangleEligibleTest, UnitLengthsAgainstLimit) {
  SignedGraph g = testutil::make_path(3);
  OpenTriangle t{0, 1, 2};
  // Sum of three unit lengths is exactly 3: eligible only under a strictly
  // larger limit; the boundary itself is excluded with no tolerance.
  EXPECT_TRUE(engine::triangle_eligible(g, unit_view(std::log(3.3)), t));
  EXPECT_FALSE(engine::triangle_eligible(g, unit_view(std::log(3.0)), t));
  EXPECT_TRUE(
      engine::triangle_eligible(
          g, unit_view(std::nextafter(std::log(3.0), 1e300)), t));
}

TEST(TriangleEligibleTest, StructuralRequirements) {
  SignedGraph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  // Closing pair is positive: not an open triple.
  EXPECT_FALSE(engine::triangle_eligible(tri, unit_view(10.0), {0, 1, 2}));
  SignedGraph path = testutil::make_path(3);
  EXPECT_FALSE(engine::triangle_eligible(path, unit_view(10.0), {0, 0, 2}));
  // Wing (0,2) does not exist, so 0 cannot act as the center.
  EXPECT_FALSE(engine::triangle_eligible(path, unit_view(10.0), {1, 0, 2}));
  EXPECT_TRUE(engine::triangle_eligible(path, unit_view(10.0), {0, 1, 2}));
  // Endpoint order does not matter: this is the same unordered triple.
  EXPECT_TRUE(engine::triangle_eligible(path, unit_view(10.0), {2, 1, 0}));
}

TEST(TriangleEligibleTest, MarksExcludeTriples) {
  SignedGraph g = testutil::make_path(3);
  std::vector<std::uint8_t> marked(2, 0);
  std::unordered_set<std::uint64_t> marked_neg;
  engine::LengthView v = unit_view(10.0);
  v.marked_pos = &marked;
  v.marked_neg = &marked_neg;
  EXPECT_TRUE(engine::triangle_eligible(g, v, {0, 1, 2}));
  marked[0] = 1;
  EXPECT_FALSE(engine::triangle_eligible(g, v, {0, 1, 2}));
  marked[0] = 0;
  marked_neg.insert(pair_key(0, 2));
  EXPECT_FALSE(engine::triangle_eligible(g, v, {0, 1, 2}));
}

TEST(TriangleEligibleTest, NegativeLengthsFromMap) {
  SignedGraph g = testutil::make_path(3);
  std::unordered_map<std::uint64_t, double> neg;
  engine::LengthView v = unit_view(std::log(4.0));
  v.neg_log_len = &neg;
  EXPECT_TRUE(engine::triangle_eligible(g, v, {0, 1, 2}));  // 1+1+1 < 4
  neg[pair_key(0, 2)] = std::log(2.0);
  EXPECT_FALSE(engine::triangle_eligible(g, v, {0, 1, 2}));  // 1+1+2 = 4
  neg[pair_key(0, 2)] = std::log(1.9);
  EXPECT_TRUE(engine::triangle_eligible(g, v, {0, 1, 2}));
}

TEST(EnumerateTest, PathExamples) {
  SignedGraph g = testutil::make_path(3);
  auto found = engine::enumerate_eligible(g, unit_view(std::log(3.3)));
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0], (OpenTriangle{0, 1, 2}));
  EXPECT_TRUE(engine::enumerate_eligible(g, unit_view(std::log(3.0))).empty());
  EXPECT_TRUE(engine::exists_eligible(g, unit_view(std::log(3.3))));
  EXPECT_FALSE(engine::exists_eligible(g, unit_view(std::log(3.0))));
}

TEST(EnumerateTest, SortedOutputAndCanonicalForm) {
  SignedGraph g = testutil::make_star(4);
  auto found = engine::enumerate_eligible(g, unit_view(std::log(3.3)));
  ASSERT_EQ(found.size(), 6u);  // C(4,2) leaf pairs
  for (std::size_t i = 0; i < found.size(); ++i) {
    EXPECT_LT(found[i].u, found[i].v);
    EXPECT_EQ(found[i].w, 0u);
    if (i > 0) {
      bool ordered = found[i - 1].u < found[i].u ||
                     (found[i - 1].u == found[i].u &&
                      found[i - 1].v < found[i].v);
      EXPECT_TRUE(ordered);
    }
  }
}

TEST(EnumerateTest, BudgetGuard) {
  // A star this large pushes m*n past the enumeration budget.
  SignedGraph g = testutil::make_star(4000);
  EXPECT_THROW(engine::enumerate_eligible(g, unit_view(1.0)), BudgetError);
  EXPECT_THROW(engine::exists_eligible(g, unit_view(1.0)), BudgetError);
}

TEST(GreedyMaximalTest, StarPicksLowestPair) {
  SignedGraph g = testutil::make_star(3);
  engine::TriangleSet s = engine::greedy_maximal(g, unit_view(std::log(3.3)));
  ASSERT_EQ(s.triangles.size(), 1u);
  EXPECT_EQ(s.triangles[0], (OpenTriangle{1, 0, 2}));
  EXPECT_EQ(s.used_pos_edges.size(), 2u);
  ASSERT_EQ(s.used_neg_pairs.size(), 1u);
  EXPECT_EQ(s.used_neg_pairs[0], pair_key(1, 2));
}

TEST(GreedyMaximalTest, RespectsPreMarkedEdges) {
  SignedGraph g = testutil::make_star(3);
  std::vector<std::uint8_t> marked(g.num_edges(), 0);
  marked[g.edge_index(0, 1)] = 1;
  engine::LengthView v = unit_view(std::log(3.3));
  v.marked_pos = &marked;
  engine::TriangleSet s = engine::greedy_maximal(g, v);
  ASSERT_EQ(s.triangles.size(), 1u);
  EXPECT_EQ(s.triangles[0], (OpenTriangle{2, 0, 3}));
}

TEST(ConflictMisTest, DisjointInputAllChosen) {
  std::vector<OpenTriangle> cands = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
  std::uint64_t rounds = 0;
  auto chosen = engine::conflict_mis(cands, 42, &rounds);
  EXPECT_EQ(chosen.size(), 3u);
  EXPECT_EQ(rounds, 1u);
}

TEST(ConflictMisTest, SharedPairLeavesOneWinner) {
  // All candidates share the wing (0,1): pairwise conflicting.
  std::vector<OpenTriangle> cands = {{2, 0, 1}, {3, 0, 1}, {4, 0, 1}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto chosen = engine::conflict_mis(cands, seed);
    EXPECT_EQ(chosen.size(), 1u);
  }
}

TEST(ConflictMisTest, OutputIsIndependentAndMaximal) {
  // Random overlapping candidate sets; the result must be an independent
  // set that every losing candidate conflicts with.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::vector<OpenTriangle> cands;
    for (int i = 0; i < 40; ++i) {
      Vertex u = static_cast<Vertex>(hash3(seed, 1, i) % 10);
      Vertex w = static_cast<Vertex>(hash3(seed, 2, i) % 10);
      Vertex v = static_cast<Vertex>(hash3(seed, 3, i) % 10);
      if (u == w || v == w || u == v) continue;
      cands.push_back(canonical({u, w, v}));
    }
    auto chosen = engine::conflict_mis(cands, seed);
    auto keys = [](const OpenTriangle& t) {
      return std::array<std::uint64_t, 3>{
          pair_key(t.w, t.u), pair_key(t.w, t.v), pair_key(t.u, t.v)};
    };
    std::unordered_set<std::uint64_t> used;
    for (const OpenTriangle& t : chosen)
      for (std::uint64_t k : keys(t)) EXPECT_TRUE(used.insert(k).second);
    for (const OpenTriangle& t : cands) {
      bool conflicts = false;
      for (std::uint64_t k : keys(t)) conflicts |= used.count(k) > 0;
      EXPECT_TRUE(conflicts) << "candidate missed by the MIS";
    }
  }
}

engine::LengthView random_view(const SignedGraph& g, std::uint64_t s,
                               std::vector<double>& pos_len,
                               std::unordered_map<std::uint64_t, double>& neg) {
  std::uint64_t m = g.num_edges();
  pos_len.resize(m);
  for (std::uint64_t e = 0; e < m; ++e)
    pos_len[e] = 0.1 * static_cast<double>(hash3(s, 0x6c31ULL, e) % 6);
  neg.clear();
  for (Vertex u = 0; u < g.num_vertices(); ++u)
    for (Vertex v = u + 1; v < g.num_vertices(); ++v)
      if (!g.has_edge(u, v) &&
          uniform01(hash3(s, 0x6c32ULL, pair_key(u, v))) < 0.3)
        neg.emplace(pair_key(u, v),
                    0.1 * (1 + hash3(s, 0x6c33ULL, pair_key(u, v)) % 5));
  engine::LengthView v;
  v.pos_log_len = &pos_len;
  v.neg_log_len = &neg;
  v.limit_log = kLog3 + (1 + static_cast<double>(s % 30)) * std::log1p(0.1);
  return v;
}

TEST(MaximalEnginesTest, BothVerifyOnRandomInstances) {
  for (int i = 0; i < 30; ++i) {
    std::uint64_t s = hash2(0x7e57ULL, i);
    Vertex n = static_cast<Vertex>(8 + s % 40);
    SignedGraph g =
        generate(GenKind::gnp_signed, n, 0.1 + 0.5 * uniform01(mix64(s)), s);
    std::vector<double> pos_len;
    std::unordered_map<std::uint64_t, double> neg;
    engine::LengthView v = random_view(g, s, pos_len, neg);

    engine::TriangleSet gs = engine::greedy_maximal(g, v);
    oracles::VerifyResult vg = oracles::verify_maximal(g, v, gs);
    EXPECT_TRUE(vg.ok) << "greedy instance " << i << ": " << vg.reason;

    engine::TriangleSet ps = engine::parallel_maximal(g, v, s, 1);
    oracles::VerifyResult vp = oracles::verify_maximal(g, v, ps);
    EXPECT_TRUE(vp.ok) << "parallel instance " << i << ": " << vp.reason;
  }
}

TEST(MaximalEnginesTest, ParallelIdenticalAcrossWorkerCounts) {
  for (int i = 0; i < 10; ++i) {
    std::uint64_t s = hash2(0xd00dULL, i);
    SignedGraph g = generate(GenKind::gnp_signed, 40, 0.35, s);
    std::vector<double> pos_len;
    std::unordered_map<std::uint64_t, double> neg;
    engine::LengthView v = random_view(g, s, pos_len, neg);
    engine::TriangleSet a = engine::parallel_maximal(g, v, s, 1);
    engine::TriangleSet b = engine::parallel_maximal(g, v, s, 4);
    ASSERT_EQ(a.triangles.size(), b.triangles.size());
    for (std::size_t k = 0; k < a.triangles.size(); ++k)
      EXPECT_EQ(a.triangles[k], b.triangles[k]);
    EXPECT_EQ(a.used_pos_edges, b.used_pos_edges);
    EXPECT_EQ(a.used_neg_pairs, b.used_neg_pairs);
  }
}

TEST(MaximalEnginesTest, ResetCountWithinBound) {
  for (int i = 0; i < 20; ++i) {
    std::uint64_t s = hash2(0xbeefULL, i);
    Vertex n = static_cast<Vertex>(20 + s % 40);
    SignedGraph g = generate(GenKind::gnp_signed, n, 0.4, s);
    if (g.num_edges() == 0) continue;
    engine::EngineStats es;
    engine::parallel_maximal(g, unit_view(std::log(3.3)), s, 1, &es);
    double bound = std::ceil(std::log(2.0 * static_cast<double>(g.num_edges())) /
                             std::log(17.0 / 16.0));
    EXPECT_LE(static_cast<double>(es.resets), bound);
  }
}

TEST(MaximalEnginesTest, TraceRowsAreConsistent) {
  SignedGraph g = generate(GenKind::gnp_signed, 30, 0.4, 11);
  engine::EngineStats es;
  std::vector<engine::EngineTraceRow> trace;
  engine::TriangleSet s =
      engine::parallel_maximal(g, unit_view(std::log(3.3)), 11, 1, &es, &trace);
  ASSERT_EQ(trace.size(), es.rounds);
  std::uint64_t selected = 0, resets = 0;
  for (const auto& row : trace) {
    selected += row.selected;
    resets += row.reset ? 1 : 0;
  }
  EXPECT_EQ(selected, s.triangles.size());
  EXPECT_EQ(resets, es.resets + 1);  // the bootstrap reset is not counted
  std::ostringstream os;
  engine::dump_engine_trace(trace, os);
  EXPECT_EQ(os.str().substr(0, 5), "round");
}

TEST(MaximalEnginesTest, EmptyAndTriangleFreeInputs) {
  SignedGraph empty(5, {});
  engine::TriangleSet s1 = engine::greedy_maximal(empty, unit_view(2.0));
  EXPECT_TRUE(s1.triangles.empty());
  engine::TriangleSet s2 = engine::parallel_maximal(empty, unit_view(2.0), 1);
  EXPECT_TRUE(s2.triangles.empty());

  // A single edge has no open triple at all.
  SignedGraph edge(2, {{0, 1}});
  EXPECT_TRUE(engine::greedy_maximal(edge, unit_view(2.0)).triangles.empty());
  EXPECT_TRUE(
      engine::parallel_maximal(edge, unit_view(2.0), 1).triangles.empty());
}

TEST(MaximalEnginesTest, DumpTrianglesFormat) {
  engine::TriangleSet s;
  s.triangles = {{1, 0, 2}, {3, 5, 4}};
  std::ostringstream os;
  engine::dump_triangles(s, os);
  EXPECT_EQ(os.str(), "1 0 2\n3 5 4\n");
}

}  // namespace
}  // namespace corrclust
