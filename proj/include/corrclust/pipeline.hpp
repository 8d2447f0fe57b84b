#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "corrclust/common.hpp"
#include "corrclust/lp_solver.hpp"
#include "corrclust/pivot_rounding.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/triangle_analysis.hpp"

namespace corrclust::pipeline {

struct ClusterConfig {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  int workers = 1;
  solver::EngineKind engine = solver::EngineKind::parallel;
};

struct ClusterReport {
  Clustering clustering;
  std::uint64_t cost = 0;  // disagreements of the final clustering
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t support_size = 0;
  std::uint64_t engine_resets = 0;
  std::uint64_t components = 0;
  std::uint64_t solved_components = 0;   // went through the LP
  std::uint64_t complete_components = 0;  // short-cut to one cluster
  double solve_ms = 0.0;
  double round_ms = 0.0;
};

namespace detail {

inline constexpr std::uint64_t kSolveTag = 0x70736c76ULL;  // "pslv"
inline constexpr std::uint64_t kRoundTag = 0x70726e64ULL;  // "prnd"

}  // namespace detail

/**
 * @brief End-to-end clustering of an arbitrary signed graph.
 *
 * Positive components are independent: no positive edge crosses them, and
 * separated negative pairs cost nothing, so each component is handled on
 * its own and the results merged. Complete-positive components (including
 * isolated vertices) become single clusters outright; everything else runs
 * the LP solver and the pivot rounding with component-specific seeds.
 */
inline ClusterReport cluster_graph(const SignedGraph& g,
                                   const ClusterConfig& cfg) {
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  Components comps = components(g);
  ClusterReport rep;
  rep.components = comps.graphs.size();
  std::vector<std::uint32_t> raw(g.num_vertices(), 0);
  std::uint32_t offset = 0;
  for (std::size_t ci = 0; ci < comps.graphs.size(); ++ci) {
    const SignedGraph& sub = comps.graphs[ci];
    const std::vector<Vertex>& verts = comps.vertices[ci];
    if (sub.is_complete_positive()) {
      for (Vertex v : verts) raw[v] = offset;
      ++offset;
      ++rep.complete_components;
      continue;
    }
    solver::SolverConfig sc;
    sc.epsilon = cfg.epsilon;
    sc.seed = hash3(cfg.seed, detail::kSolveTag, ci);
    sc.engine = cfg.engine;
    sc.workers = cfg.workers;
    auto [fs, dc, st] = solver::solve_primal2(sub, sc);
    rep.primal_obj += fs.objective;
    rep.dual_obj += dc.objective;
    rep.iterations += st.iterations;
    rep.support_size += fs.support_size;
    rep.engine_resets += st.engine_resets;
    rep.solve_ms += st.wall_time_ms;

    auto t0 = std::chrono::steady_clock::now();
    rounding::Assignment a = rounding::assignment_from_fractional(sub, fs);
    Clustering local = rounding::round_assignment(
        sub, a, hash3(cfg.seed, detail::kRoundTag, ci), cfg.workers);
    rep.round_ms += std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    for (std::size_t i = 0; i < verts.size(); ++i)
      raw[verts[i]] = offset + local.label[i];
    offset += local.num_clusters();
    ++rep.solved_components;
  }
  rep.clustering = normalize_clustering(raw);
  rep.cost = analysis::disagreements(g, rep.clustering);
  return rep;
}

}  // namespace corrclust::pipeline
