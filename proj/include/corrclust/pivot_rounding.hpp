#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "corrclust/common.hpp"
#include "corrclust/lp_solver.hpp"
#include "corrclust/parallel.hpp"
#include "corrclust/signed_graph.hpp"

namespace corrclust::rounding {

// Rounding functions mapping a fractional assignment to a keep-probability.
// Positive edges: steeper-than-linear below 5/6, saturated above; 1.2*(5/6)
// is exactly 1, so the two branches meet without a jump. The clamp guards
// against the product landing an ulp above 1 right at the knee.
inline double f_plus(double x) {
  return x <= 5.0 / 6.0 ? std::min(1.2 * x, 1.0) : 1.0;
}

inline double f_minus(double x) { return x; }

inline double attachment_prob(Sign s, double x) {
  return s == Sign::plus ? f_plus(x) : f_minus(x);
}

/**
 * @brief Fractional assignment in distance space.
 *
 * x_pos[e] is how far apart the endpoints of positive edge e sit (0 = same
 * cluster); x_neg maps a pair key to the distance of a negative pair, with
 * every absent pair at the default distance 1. Feasible assignments satisfy
 * the triangle inequality on every open triangle.
 */
struct Assignment {
  std::vector<double> x_pos;
  std::unordered_map<std::uint64_t, double> x_neg;

  double neg_distance(std::uint64_t key) const {
    auto it = x_neg.find(key);
    return it == x_neg.end() ? 1.0 : it->second;
  }
};

inline void validate_assignment(const SignedGraph& g, const Assignment& a) {
  if (a.x_pos.size() != g.num_edges())
    throw ConfigError("assignment x_pos size does not match edge count");
  for (double x : a.x_pos)
    if (!(x >= 0.0 && x <= 1.0))
      throw ConfigError("assignment value outside [0, 1]");
  for (const auto& [key, x] : a.x_neg) {
    if (!(x >= 0.0 && x <= 1.0))
      throw ConfigError("assignment value outside [0, 1]");
    if (g.has_edge(pair_lo(key), pair_hi(key)))
      throw ConfigError("x_neg entry for a positive edge");
    if (pair_hi(key) >= g.num_vertices())
      throw ConfigError("x_neg entry outside vertex range");
  }
}

// LP values become distances: a positive edge's z is already its cut
// extent, a negative pair's z measures co-clustering so distance is 1 - z.
// Untouched negatives (z = 0) sit at distance 1 and stay implicit.
inline Assignment assignment_from_fractional(
    const SignedGraph& g, const solver::FractionalSolution& fs) {
  Assignment a;
  a.x_pos.resize(fs.z_pos.size());
  for (std::size_t e = 0; e < fs.z_pos.size(); ++e)
    a.x_pos[e] = std::clamp(fs.z_pos[e], 0.0, 1.0);
  for (const auto& [key, z] : fs.z_neg)
    a.x_neg.emplace(key, std::clamp(1.0 - z, 0.0, 1.0));
  validate_assignment(g, a);
  return a;
}

// Kept-pair adjacency after the probabilistic thinning step. Vertices with
// no kept pair have empty lists.
struct DerivedGraph {
  std::vector<std::vector<Vertex>> adj;
};

struct RoundingStats {
  std::uint64_t coin_draws = 0;
  std::uint64_t kept_pos = 0;
  std::uint64_t kept_neg = 0;
  std::uint64_t pivot_rounds = 0;
};

namespace detail {

inline constexpr std::uint64_t kCoinTag = 0x636f696eULL;  // "coin"
inline constexpr std::uint64_t kPriTag = 0x70726976ULL;   // "priv"

// A pair survives with probability 1 - p. Certain removals (p = 1) burn no
// randomness at all, which is what keeps the untouched negative pairs free:
// they are never enumerated, let alone drawn.
inline bool keep_pair(std::uint64_t seed, std::uint64_t key, double p) {
  CORRCLUST_ASSERT(p >= 0.0 && p <= 1.0, "keep probability outside [0, 1]");
  if (p >= 1.0) return false;
  return uniform01(hash3(seed, kCoinTag, key)) >= p;
}

}  // namespace detail

/**
 * @brief Thin the pair set: each pair survives independently with
 * probability 1 - attachment_prob(sign, x).
 *
 * Coins are pure hashes of (seed, pair), so the outcome for a pair never
 * depends on enumeration order or worker count.
 */
inline DerivedGraph pre_round(const SignedGraph& g, const Assignment& a,
                              std::uint64_t seed,
                              RoundingStats* stats = nullptr) {
  DerivedGraph dg;
  dg.adj.assign(g.num_vertices(), {});
  auto keep_edge = [&](Vertex u, Vertex v) {
    dg.adj[u].push_back(v);
    dg.adj[v].push_back(u);
  };
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edges()[e];
    double p = f_plus(a.x_pos[e]);
    if (p < 1.0 && stats) ++stats->coin_draws;
    if (detail::keep_pair(seed, pair_key(ed.u, ed.v), p)) {
      keep_edge(ed.u, ed.v);
      if (stats) ++stats->kept_pos;
    }
  }
  std::vector<std::pair<std::uint64_t, double>> negs(a.x_neg.begin(),
                                                     a.x_neg.end());
  std::sort(negs.begin(), negs.end());
  for (auto [key, x] : negs) {
    double p = f_minus(x);
    if (p < 1.0 && stats) ++stats->coin_draws;
    if (detail::keep_pair(seed, key, p)) {
      keep_edge(pair_lo(key), pair_hi(key));
      if (stats) ++stats->kept_neg;
    }
  }
  for (auto& lst : dg.adj) std::sort(lst.begin(), lst.end());
  return dg;
}

namespace detail {

// Random priorities with vertex id as tie break: a total order even in the
// (astronomically unlikely) event of a hash collision.
struct PriorityKey {
  std::uint64_t h;
  Vertex v;
  bool operator<(const PriorityKey& o) const {
    return h != o.h ? h < o.h : v < o.v;
  }
};

inline std::vector<PriorityKey> priorities(Vertex n, std::uint64_t seed) {
  std::vector<PriorityKey> pri(n);
  for (Vertex v = 0; v < n; ++v) pri[v] = {hash3(seed, kPriTag, v), v};
  return pri;
}

}  // namespace detail

// Reference pivoting: walk vertices in priority order; each still-unclustered
// vertex becomes a pivot and absorbs its still-unclustered neighbors. Labels
// are pivot vertex ids (not yet normalized).
inline std::vector<std::uint32_t> pivot_partition_seq(const DerivedGraph& dg,
                                                      std::uint64_t seed) {
  Vertex n = static_cast<Vertex>(dg.adj.size());
  auto pri = detail::priorities(n, seed);
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](Vertex x, Vertex y) { return pri[x] < pri[y]; });
  constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<std::uint32_t> label(n, kUnset);
  for (Vertex v : order) {
    if (label[v] != kUnset) continue;
    label[v] = v;
    for (Vertex w : dg.adj[v])
      if (label[w] == kUnset) label[w] = v;
  }
  return label;
}

struct PivotTraceRow {
  std::uint64_t round = 0;
  std::uint64_t pivots = 0;
  std::uint64_t newly_clustered = 0;
};

/**
 * @brief Round-parallel pivoting, bit-identical to pivot_partition_seq.
 *
 * Each round every unclustered vertex that is a local priority minimum among
 * its unclustered neighbors becomes a pivot; pivots and their unclustered
 * neighborhoods leave the pool. Afterwards every non-pivot joins the
 * smallest-priority pivot among all its neighbors. That final sweep is what
 * makes the outcome order-free: a vertex adjacent to pivots from different
 * rounds picks the same winner the sequential scan would have reached first.
 */
inline std::vector<std::uint32_t> pivot_partition_par(
    const DerivedGraph& dg, std::uint64_t seed, int workers = 1,
    RoundingStats* stats = nullptr,
    std::vector<PivotTraceRow>* trace = nullptr) {
  Vertex n = static_cast<Vertex>(dg.adj.size());
  auto pri = detail::priorities(n, seed);
  std::vector<std::uint8_t> alive(n, 1), is_pivot(n, 0), selected(n, 0);
  std::size_t alive_cnt = n;
  std::uint64_t round = 0;
  while (alive_cnt > 0) {
    parallel_for(n, workers, [&](std::size_t vi) {
      Vertex v = static_cast<Vertex>(vi);
      if (!alive[v]) {
        selected[v] = 0;
        return;
      }
      bool local_min = true;
      for (Vertex w : dg.adj[v])
        if (alive[w] && pri[w] < pri[v]) {
          local_min = false;
          break;
        }
      selected[v] = local_min ? 1 : 0;
    });
    std::uint64_t picked = 0, removed = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (!selected[v]) continue;
      ++picked;
      is_pivot[v] = 1;
      if (alive[v]) {
        alive[v] = 0;
        ++removed;
      }
      for (Vertex w : dg.adj[v])
        if (alive[w]) {
          alive[w] = 0;
          ++removed;
        }
    }
    // The globally smallest alive priority is always a local minimum.
    CORRCLUST_ASSERT(picked > 0, "pivot round made no progress");
    alive_cnt -= removed;
    ++round;
    if (trace) trace->push_back({round, picked, removed});
  }
  if (stats) stats->pivot_rounds = round;

  std::vector<std::uint32_t> label(n);
  parallel_for(n, workers, [&](std::size_t vi) {
    Vertex v = static_cast<Vertex>(vi);
    if (is_pivot[v]) {
      label[v] = v;
      return;
    }
    bool found = false;
    Vertex best = 0;
    for (Vertex w : dg.adj[v])
      if (is_pivot[w] && (!found || pri[w] < pri[best])) {
        best = w;
        found = true;
      }
    CORRCLUST_ASSERT(found, "non-pivot vertex without a pivot neighbor");
    label[v] = best;
  });
  return label;
}

/**
 * @brief Full rounding: thin pairs, pivot on what survives, normalize.
 *
 * Deterministic in (g, a, seed); the worker count changes scheduling only.
 */
inline Clustering round_assignment(const SignedGraph& g, const Assignment& a,
                                   std::uint64_t seed, int workers = 1,
                                   RoundingStats* stats = nullptr) {
  validate_assignment(g, a);
  DerivedGraph dg = pre_round(g, a, seed, stats);
  std::vector<std::uint32_t> raw = pivot_partition_par(dg, seed, workers,
                                                       stats);
  return normalize_clustering(raw);
}

}  // namespace corrclust::rounding
