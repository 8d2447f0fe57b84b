#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "corrclust/common.hpp"
#include "corrclust/pivot_rounding.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/triangle_analysis.hpp"
#include "corrclust/triangle_engine.hpp"

namespace corrclust::oracles {

// Hard caps for the exhaustive oracles. They exist to fail fast on inputs
// where exact computation stops being exact arithmetic and starts being a
// heat source.
struct OracleBudget {
  Vertex max_n = 12;                     // brute-force clustering
  std::uint64_t max_states = 10'000'000;  // search nodes before bailing
  Vertex max_perm_n = 6;                 // exact expected cost: vertices
  int max_coins = 12;                    // exact expected cost: random pairs
};

namespace detail {

struct BruteForceSearch {
  const std::vector<std::uint64_t>& pos;  // positive adjacency bitmasks
  Vertex n;
  std::uint64_t max_states;
  std::uint64_t states = 0;
  std::uint64_t best = 0;
  std::vector<std::uint64_t> clusters;

  // Extend the partial clustering vertex by vertex. Placing v into cluster C
  // adds one disagreement for every earlier positive neighbor outside C and
  // every non-neighbor inside; both terms fall out of popcounts.
  void go(Vertex v, std::uint64_t placed, std::uint64_t cost) {
    if (cost >= best) return;
    if (v == n) {
      best = cost;
      return;
    }
    if (++states > max_states)
      throw BudgetError("brute-force search exceeded its state budget");
    std::uint64_t nb = pos[v] & placed;
    std::uint64_t nb_total = static_cast<std::uint64_t>(
        __builtin_popcountll(nb));
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      std::uint64_t in_c = static_cast<std::uint64_t>(
          __builtin_popcountll(pos[v] & clusters[c]));
      std::uint64_t sz = static_cast<std::uint64_t>(
          __builtin_popcountll(clusters[c]));
      std::uint64_t added = nb_total + sz - 2 * in_c;
      std::uint64_t saved = clusters[c];
      clusters[c] |= 1ULL << v;
      go(v + 1, placed | (1ULL << v), cost + added);
      clusters[c] = saved;
    }
    clusters.push_back(1ULL << v);
    go(v + 1, placed | (1ULL << v), cost + nb_total);
    clusters.pop_back();
  }
};

}  // namespace detail

/**
 * @brief Exact minimum number of disagreements over all clusterings.
 *
 * Enumerates set partitions in restricted-growth order with incremental
 * cost and branch-and-bound pruning. Exponential; refuses n beyond the
 * budget.
 */
inline std::uint64_t brute_force_opt(const SignedGraph& g,
                                     const OracleBudget& budget = {}) {
  Vertex n = g.num_vertices();
  if (n > budget.max_n)
    throw BudgetError("graph too large for brute-force optimum");
  if (n == 0) return 0;
  std::vector<std::uint64_t> pos(n, 0);
  for (const Edge& e : g.edges()) {
    pos[e.u] |= 1ULL << e.v;
    pos[e.v] |= 1ULL << e.u;
  }
  detail::BruteForceSearch search{pos, n, budget.max_states, 0, 0, {}};
  // Start from the all-singletons upper bound: every positive edge cut.
  search.best = g.num_edges();
  search.clusters.reserve(n);
  search.go(0, 0, 0);
  return search.best;
}

/**
 * @brief Exact expectation of the rounding cost for a fractional
 * assignment, over both the pair coins and the pivot order.
 *
 * Enumerates every outcome of the random pair coins (pairs with keep
 * probability strictly between 0 and 1) weighted by its probability, and
 * for each outcome averages the sequential pivot cost over all n! priority
 * orders. Uniform random priorities induce exactly the uniform order, so
 * this matches the randomized implementation's expectation.
 */
inline double exact_expected_cost(const SignedGraph& g,
                                  const rounding::Assignment& a,
                                  const OracleBudget& budget = {}) {
  rounding::validate_assignment(g, a);
  Vertex n = g.num_vertices();
  if (n > budget.max_perm_n)
    throw BudgetError("too many vertices for exact expected cost");

  struct RandomPair {
    Vertex u, v;
    double p;
  };
  std::vector<RandomPair> coins;
  std::vector<std::uint64_t> fixed_adj(n, 0);  // pairs kept with certainty
  auto classify = [&](Vertex u, Vertex v, double p) {
    if (p <= 0.0) {
      fixed_adj[u] |= 1ULL << v;
      fixed_adj[v] |= 1ULL << u;
    } else if (p < 1.0) {
      coins.push_back({u, v, p});
    }
  };
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    classify(g.edges()[e].u, g.edges()[e].v, rounding::f_plus(a.x_pos[e]));
  std::vector<std::pair<std::uint64_t, double>> negs(a.x_neg.begin(),
                                                     a.x_neg.end());
  std::sort(negs.begin(), negs.end());
  for (auto [key, x] : negs)
    classify(pair_lo(key), pair_hi(key), rounding::f_minus(x));
  if (static_cast<int>(coins.size()) > budget.max_coins)
    throw BudgetError("too many random pairs for exact expected cost");

  std::vector<std::uint64_t> pos(n, 0);
  for (const Edge& e : g.edges()) {
    pos[e.u] |= 1ULL << e.v;
    pos[e.v] |= 1ULL << e.u;
  }
  std::uint64_t m = g.num_edges();

  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  double fact = 1.0;
  for (Vertex v = 2; v <= n; ++v) fact *= v;

  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << coins.size()); ++mask) {
    double weight = 1.0;
    std::vector<std::uint64_t> adj = fixed_adj;
    for (std::size_t i = 0; i < coins.size(); ++i) {
      if (mask >> i & 1) {
        weight *= 1.0 - coins[i].p;
        adj[coins[i].u] |= 1ULL << coins[i].v;
        adj[coins[i].v] |= 1ULL << coins[i].u;
      } else {
        weight *= coins[i].p;
      }
    }
    std::sort(order.begin(), order.end());
    double perm_sum = 0.0;
    do {
      std::uint64_t unclustered = (1ULL << n) - 1;
      std::uint64_t internal_pos = 0, within_pairs = 0;
      for (Vertex v : order) {
        if (!(unclustered >> v & 1)) continue;
        std::uint64_t cl = (adj[v] & unclustered) | (1ULL << v);
        unclustered &= ~cl;
        std::uint64_t sz = static_cast<std::uint64_t>(
            __builtin_popcountll(cl));
        within_pairs += sz * (sz - 1) / 2;
        std::uint64_t in_edges = 0;
        for (std::uint64_t rest = cl; rest;) {
          Vertex w = static_cast<Vertex>(__builtin_ctzll(rest));
          rest &= rest - 1;
          in_edges += static_cast<std::uint64_t>(
              __builtin_popcountll(pos[w] & cl));
        }
        internal_pos += in_edges / 2;
      }
      perm_sum += static_cast<double>((m - internal_pos) +
                                      (within_pairs - internal_pos));
    } while (std::next_permutation(order.begin(), order.end()));
    total += weight * perm_sum / fact;
  }
  return total;
}

struct VerifyResult {
  bool ok = true;
  std::string reason;
};

/**
 * @brief Independent check that a triangle set is edge-disjoint, eligible,
 * and maximal under the given lengths.
 *
 * Maximality is certified by exhaustively searching for an eligible triple
 * avoiding every consumed pair; the search is the naive enumerator, shared
 * with nothing in the production path.
 */
inline VerifyResult verify_maximal(const SignedGraph& g,
                                   const engine::LengthView& view,
                                   const engine::TriangleSet& s) {
  auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };

  std::vector<std::uint32_t> pos_used;
  std::vector<std::uint64_t> neg_used;
  for (const OpenTriangle& t : s.triangles) {
    if (!engine::triangle_eligible(g, view, t))
      return fail("set contains an ineligible triple");
    pos_used.push_back(static_cast<std::uint32_t>(g.edge_index(t.w, t.u)));
    pos_used.push_back(static_cast<std::uint32_t>(g.edge_index(t.w, t.v)));
    neg_used.push_back(pair_key(t.u, t.v));
  }
  auto has_dup = [](auto v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_dup(pos_used)) return fail("a positive edge is used twice");
  if (has_dup(neg_used)) return fail("a negative pair is used twice");

  auto sorted_eq = [](auto x, auto y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  };
  if (!sorted_eq(pos_used, s.used_pos_edges))
    return fail("used_pos_edges does not match the triangles");
  if (!sorted_eq(neg_used, s.used_neg_pairs))
    return fail("used_neg_pairs does not match the triangles");

  // Residual search: extend the caller's marks with the consumed pairs and
  // look for anything still eligible.
  std::vector<std::uint8_t> marked(g.num_edges(), 0);
  if (view.marked_pos)
    marked.assign(view.marked_pos->begin(), view.marked_pos->end());
  std::unordered_set<std::uint64_t> marked_neg;
  if (view.marked_neg) marked_neg = *view.marked_neg;
  for (std::uint32_t e : pos_used) marked[e] = 1;
  for (std::uint64_t k : neg_used) marked_neg.insert(k);
  engine::LengthView ext = view;
  ext.marked_pos = &marked;
  ext.marked_neg = &marked_neg;
  if (engine::exists_eligible(g, ext))
    return fail("an eligible triple avoids the set: not maximal");
  return {};
}

/**
 * @brief Decide whether an undirected graph contains a triangle, using only
 * the eligible-triple existence test.
 *
 * Each repetition samples half the edges as positive pairs of length 1 and
 * walls off every non-edge with length 5 under limit 4: the only way a
 * triple can come in under the limit is two sampled edges closed by an
 * unsampled edge, i.e. a triangle of h. A triangle survives a repetition
 * undetected with probability at most 5/8, so the error is one-sided and
 * vanishes geometrically in the repetition count.
 */
inline bool triangle_detect_reduction(const SignedGraph& h,
                                      std::uint64_t seed,
                                      std::uint64_t* reps_out = nullptr) {
  constexpr std::uint64_t kRedTag = 0x72656431ULL;  // "red1"
  Vertex n = h.num_vertices();
  std::uint64_t reps = 8;
  if (n >= 2) {
    double need = 2.0 * std::log(static_cast<double>(n)) / std::log(8.0 / 5.0);
    reps = std::max<std::uint64_t>(8, static_cast<std::uint64_t>(need) + 1);
  }
  if (reps_out) *reps_out = reps;

  const double wall = std::log(5.0);
  std::unordered_map<std::uint64_t, double> non_edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!h.has_edge(u, v)) non_edges.emplace(pair_key(u, v), wall);

  for (std::uint64_t rep = 0; rep < reps; ++rep) {
    std::vector<Edge> sampled;
    for (const Edge& e : h.edges())
      if (uniform01(hash3(hash2(seed, rep), kRedTag, pair_key(e.u, e.v))) <
          0.5)
        sampled.push_back(e);
    SignedGraph g(n, sampled);
    engine::LengthView view;
    view.neg_log_len = &non_edges;
    view.limit_log = std::log(4.0);
    if (engine::exists_eligible(g, view)) return true;
  }
  return false;
}

}  // namespace corrclust::oracles
