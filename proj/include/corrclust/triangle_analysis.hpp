#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "corrclust/common.hpp"
#include "corrclust/pivot_rounding.hpp"
#include "corrclust/signed_graph.hpp"

namespace corrclust::analysis {

/**
 * @brief Per-pivot disagreement probability for one pair.
 *
 * With pivot w, each endpoint of the pair attaches to w independently; p1
 * and p2 are the respective probabilities of NOT attaching. A positive pair
 * disagrees when exactly one endpoint attaches, a negative pair when both
 * do.
 */
inline double cost_given_pivot(Sign s, double p1, double p2) {
  if (s == Sign::plus) return p1 + p2 - 2.0 * p1 * p2;
  return (1.0 - p1) * (1.0 - p2);
}

// LP budget the same pivot step may spend on the pair: its fractional value
// (x for positive, 1-x for negative) scaled by the probability the pivot
// decides the pair at all, i.e. at least one endpoint attaches.
inline double lp_given_pivot(Sign s, double x, double p1, double p2) {
  double decided = 1.0 - p1 * p2;
  return (s == Sign::plus ? x : 1.0 - x) * decided;
}

// Signs of the three pairs of a triple {u, w, v}: uw and wv are the wing
// pairs at the center w, vu closes the triple.
struct TriangleType {
  Sign uw, wv, vu;
};

struct AlgLp {
  double alg = 0.0;
  double lp = 0.0;
};

/**
 * @brief Expected disagreement mass vs. LP mass a triple generates when one
 * of its own corners acts as pivot.
 *
 * a, b, c are the x-distances of pairs (u,w), (w,v), (v,u). Each corner
 * pivots on the opposite pair; attachment probabilities follow the pair
 * signs through f_plus/f_minus.
 */
inline AlgLp alg_lp_triangle(TriangleType ty, double a, double b, double c) {
  double p1 = rounding::attachment_prob(ty.uw, a);
  double p2 = rounding::attachment_prob(ty.wv, b);
  double p3 = rounding::attachment_prob(ty.vu, c);
  AlgLp r;
  r.alg = cost_given_pivot(ty.vu, p1, p2) + cost_given_pivot(ty.uw, p3, p2) +
          cost_given_pivot(ty.wv, p3, p1);
  r.lp = lp_given_pivot(ty.vu, c, p1, p2) + lp_given_pivot(ty.uw, a, p3, p2) +
         lp_given_pivot(ty.wv, b, p3, p1);
  return r;
}

// The slack ALG - 2.4 * LP; the rounding guarantee needs this <= 0 on every
// triple that can arise from a feasible assignment.
inline double c_function(TriangleType ty, double a, double b, double c) {
  AlgLp r = alg_lp_triangle(ty, a, b, c);
  return r.alg - 2.4 * r.lp;
}

// ALG/LP with the conventions 0/0 = 0 and x/0 = +infinity for x > 0.
inline double alg_lp_ratio(TriangleType ty, double a, double b, double c) {
  AlgLp r = alg_lp_triangle(ty, a, b, c);
  if (r.lp > 0.0) return r.alg / r.lp;
  return r.alg > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

// Disagreements of an integral clustering: cut positive edges plus
// co-clustered negative pairs (all non-edges of the same cluster).
inline std::uint64_t disagreements(const SignedGraph& g, const Clustering& c) {
  CORRCLUST_ASSERT(c.label.size() == g.num_vertices(),
                   "clustering size does not match the graph");
  std::uint64_t internal_pos = 0;
  for (const Edge& e : g.edges())
    if (c.label[e.u] == c.label[e.v]) ++internal_pos;
  std::vector<std::uint64_t> size(c.num_clusters(), 0);
  for (std::uint32_t l : c.label) ++size[l];
  std::uint64_t within_pairs = 0;
  for (std::uint64_t s : size) within_pairs += s * (s - 1) / 2;
  return (g.num_edges() - internal_pos) + (within_pairs - internal_pos);
}

// Objective of an assignment in LP units: positive pairs pay their
// distance, negative pairs pay their closeness. Implicit negatives at
// distance 1 pay nothing.
inline double lp_objective(const SignedGraph& g,
                           const rounding::Assignment& a) {
  CORRCLUST_ASSERT(a.x_pos.size() == g.num_edges(),
                   "assignment does not match the graph");
  double sum = 0.0;
  for (double x : a.x_pos) sum += x;
  std::vector<std::pair<std::uint64_t, double>> negs(a.x_neg.begin(),
                                                     a.x_neg.end());
  std::sort(negs.begin(), negs.end());
  for (auto [key, x] : negs) sum += 1.0 - x;
  return sum;
}

struct TriangleCheck {
  bool ok = true;
  double worst_violation = 0.0;  // max over triples of c - (a + b)
  OpenTriangle worst{0, 0, 0};
};

/**
 * @brief Verify the two-hop triangle inequality x_uw + x_wv >= x_uv over
 * every open triple (both wings positive, closing pair not positive).
 *
 * Throws BudgetError when the wing enumeration would exceed ~1e7 steps.
 */
inline TriangleCheck check_partial_triangle(const SignedGraph& g,
                                            const rounding::Assignment& a,
                                            double tol = 1e-12) {
  rounding::validate_assignment(g, a);
  if (static_cast<std::uint64_t>(g.num_edges()) * g.num_vertices() >
      10'000'000ULL)
    throw BudgetError("triangle check too large for exhaustive enumeration");
  TriangleCheck out;
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    auto nbrs = g.neighbors(w);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        Vertex u = nbrs[i], v = nbrs[j];
        if (g.has_edge(u, v)) continue;
        double lhs = a.x_pos[g.edge_index(w, u)] + a.x_pos[g.edge_index(w, v)];
        double rhs = a.neg_distance(pair_key(u, v));
        double viol = rhs - lhs;
        if (viol > out.worst_violation) {
          out.worst_violation = viol;
          out.worst = {u, w, v};
        }
      }
    }
  }
  out.ok = out.worst_violation <= tol;
  return out;
}

}  // namespace corrclust::analysis
