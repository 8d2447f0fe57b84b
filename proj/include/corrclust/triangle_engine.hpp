#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corrclust/common.hpp"
#include "corrclust/parallel.hpp"
#include "corrclust/signed_graph.hpp"

namespace corrclust::engine {

/**
 * @brief Read-only view of the current length function in log space.
 *
 * Lengths are l >= 1, stored as log l. Absent entries mean log l = 0 (l = 1):
 * `pos_log_len` may be null (all positive edges at length 1) and negative
 * pairs default to 1 unless present in `neg_log_len`. `limit_log` is log L
 * for the eligibility bound L = (1+eps)*alpha. The optional mark sets let a
 * caller exclude pairs already consumed by accepted triangles.
 */
struct LengthView {
  const std::vector<double>* pos_log_len = nullptr;  // by edge index
  const std::unordered_map<std::uint64_t, double>* neg_log_len = nullptr;
  double limit_log = 0.0;
  const std::vector<std::uint8_t>* marked_pos = nullptr;  // by edge index
  const std::unordered_set<std::uint64_t>* marked_neg = nullptr;

  double pos_len_log(std::size_t edge) const {
    return pos_log_len ? (*pos_log_len)[edge] : 0.0;
  }
  double neg_len_log(std::uint64_t key) const {
    if (!neg_log_len) return 0.0;
    auto it = neg_log_len->find(key);
    return it == neg_log_len->end() ? 0.0 : it->second;
  }
  bool pos_marked(std::size_t edge) const {
    return marked_pos && (*marked_pos)[edge] != 0;
  }
  bool neg_marked(std::uint64_t key) const {
    return marked_neg && marked_neg->count(key) != 0;
  }
};

// A set of edge-disjoint triangles plus the pair keys they consumed. The
// closing negative pair counts as used just like the two positive edges.
struct TriangleSet {
  std::vector<OpenTriangle> triangles;
  std::vector<std::uint32_t> used_pos_edges;
  std::vector<std::uint64_t> used_neg_pairs;
};

// Lines "u w v" in the stored (canonical) order.
inline void dump_triangles(const TriangleSet& ts, std::ostream& out) {
  for (OpenTriangle t : ts.triangles)
    out << t.u << ' ' << t.w << ' ' << t.v << '\n';
}

// Full eligibility check for one triple: open triangle, nothing marked, and
// total length strictly below the limit. Equal-to-limit counts as
// ineligible; the comparison is an exact double comparison, no tolerance.
inline bool triangle_eligible(const SignedGraph& g, const LengthView& view,
                              OpenTriangle t) {
  if (t.u == t.v || t.u == t.w || t.v == t.w) return false;
  std::size_t e1 = g.edge_index(t.w, t.u);
  std::size_t e2 = g.edge_index(t.w, t.v);
  if (e1 == SignedGraph::npos_edge || e2 == SignedGraph::npos_edge)
    return false;
  if (g.has_edge(t.u, t.v)) return false;
  std::uint64_t nk = pair_key(t.u, t.v);
  if (view.pos_marked(e1) || view.pos_marked(e2) || view.neg_marked(nk))
    return false;
  return log_add3(view.pos_len_log(e1), view.pos_len_log(e2),
                  view.neg_len_log(nk)) < view.limit_log;
}

namespace detail {

// Neighbor entry in a per-center list, ordered by (length, neighbor id).
// The order doubles as triangle ownership: an arc only explores partners
// strictly after its own position, so each triangle is examined exactly once
// per pass, from its shorter positive edge.
struct NbrEntry {
  double len;  // log length of the edge (w, v)
  Vertex v;
  std::uint32_t edge;
};

inline bool entry_less(const NbrEntry& a, const NbrEntry& b) {
  return a.len != b.len ? a.len < b.len : a.v < b.v;
}

inline bool key_less(const NbrEntry& a, double len, Vertex v) {
  return a.len != len ? a.len < len : a.v < v;
}

inline std::vector<std::vector<NbrEntry>> sorted_neighbor_lists(
    const SignedGraph& g, const LengthView& view) {
  std::vector<std::vector<NbrEntry>> lists(g.num_vertices());
  for (Vertex w = 0; w < g.num_vertices(); ++w)
    lists[w].reserve(g.degree(w));
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    Edge e = g.edges()[i];
    double len = view.pos_len_log(i);
    lists[e.u].push_back({len, e.v, static_cast<std::uint32_t>(i)});
    lists[e.v].push_back({len, e.u, static_cast<std::uint32_t>(i)});
  }
  for (auto& l : lists) std::sort(l.begin(), l.end(), entry_less);
  return lists;
}

// Position of the entry with key exactly (len, v).
inline std::size_t find_key(const std::vector<NbrEntry>& list, double len,
                            Vertex v) {
  auto it = std::lower_bound(
      list.begin(), list.end(), NbrEntry{len, v, 0},
      [](const NbrEntry& a, const NbrEntry& b) { return entry_less(a, b); });
  CORRCLUST_ASSERT(it != list.end() && it->v == v && it->len == len,
                   "neighbor entry missing from sorted list");
  return static_cast<std::size_t>(it - list.begin());
}

constexpr std::uint64_t kMisTag = 0x6d697331ULL;  // "mis1"

}  // namespace detail

inline void enumerate_budget_check(const SignedGraph& g) {
  if (static_cast<std::uint64_t>(g.num_edges()) * g.num_vertices() >
      10'000'000ULL)
    throw BudgetError("triangle enumeration budget exceeded: m*n = " +
                      std::to_string(g.num_edges() * std::uint64_t{
                                         g.num_vertices()}));
}

// All eligible open triangles, sorted by (u, w, v). Intended as a small-scale
// oracle; guarded by the m*n budget.
inline std::vector<OpenTriangle> enumerate_eligible(const SignedGraph& g,
                                                    const LengthView& view) {
  enumerate_budget_check(g);
  auto lists = detail::sorted_neighbor_lists(g, view);
  std::vector<OpenTriangle> out;
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    const auto& l = lists[w];
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (view.pos_marked(l[i].edge)) continue;
      for (std::size_t j = i + 1; j < l.size(); ++j) {
        // Sorted by length: once even a unit closing pair cannot fit, no
        // later partner can either.
        if (!(log_add3(l[i].len, l[j].len, 0.0) < view.limit_log)) break;
        if (view.pos_marked(l[j].edge)) continue;
        Vertex u = l[i].v, v = l[j].v;
        if (g.has_edge(u, v)) continue;
        std::uint64_t nk = pair_key(u, v);
        if (view.neg_marked(nk)) continue;
        if (!(log_add3(l[i].len, l[j].len, view.neg_len_log(nk)) <
              view.limit_log))
          continue;
        out.push_back(canonical({u, w, v}));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](OpenTriangle a, OpenTriangle b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.w != b.w) return a.w < b.w;
    return a.v < b.v;
  });
  return out;
}

// Existence version of enumerate_eligible with early exit; same budget.
inline bool exists_eligible(const SignedGraph& g, const LengthView& view) {
  enumerate_budget_check(g);
  auto lists = detail::sorted_neighbor_lists(g, view);
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    const auto& l = lists[w];
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (view.pos_marked(l[i].edge)) continue;
      for (std::size_t j = i + 1; j < l.size(); ++j) {
        if (!(log_add3(l[i].len, l[j].len, 0.0) < view.limit_log)) break;
        if (view.pos_marked(l[j].edge)) continue;
        Vertex u = l[i].v, v = l[j].v;
        if (g.has_edge(u, v)) continue;
        std::uint64_t nk = pair_key(u, v);
        if (view.neg_marked(nk)) continue;
        if (log_add3(l[i].len, l[j].len, view.neg_len_log(nk)) <
            view.limit_log)
          return true;
      }
    }
  }
  return false;
}

namespace detail {

// MIS over the implicit conflict graph: two candidates conflict iff they
// share any of their three pair keys. Never materializes the graph; each
// round computes per-key minima and keeps candidates that are the minimum on
// all three of their keys. The global minimum always wins, so every round
// strictly shrinks the candidate set.
inline std::vector<std::size_t> conflict_mis_indices(
    const std::vector<OpenTriangle>& cands, std::uint64_t seed,
    std::uint64_t* rounds_out) {
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> alive(cands.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  std::uint64_t rounds = 0;
  // (priority, u, w, v) of the current best candidate per pair key. The
  // vertex tuple breaks the (astronomically unlikely) hash ties so the
  // order is total and runs are reproducible.
  struct Best {
    std::uint64_t pri;
    OpenTriangle t;
    std::size_t idx;
  };
  auto better = [](std::uint64_t pri, OpenTriangle t, const Best& b) {
    if (pri != b.pri) return pri < b.pri;
    if (t.u != b.t.u) return t.u < b.t.u;
    if (t.w != b.t.w) return t.w < b.t.w;
    return t.v < b.t.v;
  };
  std::unordered_map<std::uint64_t, Best> best;
  std::unordered_set<std::uint64_t> winner_keys;
  while (!alive.empty()) {
    ++rounds;
    std::uint64_t round_seed = hash2(seed, kMisTag + rounds);
    best.clear();
    for (std::size_t i : alive) {
      OpenTriangle t = cands[i];
      std::uint64_t pri = hash3(round_seed, t.w, pair_key(t.u, t.v));
      for (std::uint64_t key : {pair_key(t.w, t.u), pair_key(t.w, t.v),
                                pair_key(t.u, t.v)}) {
        auto [it, fresh] = best.emplace(key, Best{pri, t, i});
        if (!fresh && better(pri, t, it->second))
          it->second = Best{pri, t, i};
      }
    }
    winner_keys.clear();
    std::vector<std::size_t> next;
    for (std::size_t i : alive) {
      OpenTriangle t = cands[i];
      bool wins = true;
      for (std::uint64_t key : {pair_key(t.w, t.u), pair_key(t.w, t.v),
                                pair_key(t.u, t.v)})
        wins = wins && best.at(key).idx == i;
      if (wins) {
        chosen.push_back(i);
        winner_keys.insert(pair_key(t.w, t.u));
        winner_keys.insert(pair_key(t.w, t.v));
        winner_keys.insert(pair_key(t.u, t.v));
      }
    }
    for (std::size_t i : alive) {
      OpenTriangle t = cands[i];
      bool hit = winner_keys.count(pair_key(t.w, t.u)) ||
                 winner_keys.count(pair_key(t.w, t.v)) ||
                 winner_keys.count(pair_key(t.u, t.v));
      if (!hit) next.push_back(i);
    }
    CORRCLUST_ASSERT(next.size() < alive.size(),
                     "conflict MIS round made no progress");
    alive.swap(next);
  }
  std::sort(chosen.begin(), chosen.end());
  if (rounds_out) *rounds_out = rounds;
  return chosen;
}

}  // namespace detail

// Maximal independent set in the implicit conflict graph of `cands`,
// returned in input order. Deterministic in (cands, seed).
inline std::vector<OpenTriangle> conflict_mis(
    const std::vector<OpenTriangle>& cands, std::uint64_t seed,
    std::uint64_t* rounds_out = nullptr) {
  std::vector<OpenTriangle> out;
  for (std::size_t i : detail::conflict_mis_indices(cands, seed, rounds_out))
    out.push_back(cands[i]);
  return out;
}

/**
 * @brief Sequential greedy maximal edge-disjoint eligible triangle set.
 *
 * Arcs (one per edge direction) are processed in non-decreasing
 * (length, center, endpoint) order; each arc scans partners strictly after
 * its own position in the center's sorted neighbor list and takes the first
 * eligible triangle whose three pairs are unconsumed. The scan stops early
 * once even a unit-length closing pair could not fit under the limit.
 */
inline TriangleSet greedy_maximal(const SignedGraph& g,
                                  const LengthView& view) {
  auto lists = detail::sorted_neighbor_lists(g, view);
  std::vector<std::uint8_t> marked(g.num_edges(), 0);
  for (std::size_t i = 0; i < g.num_edges(); ++i)
    if (view.pos_marked(i)) marked[i] = 1;
  std::unordered_set<std::uint64_t> marked_neg;
  if (view.marked_neg) marked_neg = *view.marked_neg;

  struct Arc {
    double len;
    Vertex w, u;
    std::uint32_t edge;
  };
  std::vector<Arc> arcs;
  arcs.reserve(g.num_edges() * 2);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    Edge e = g.edges()[i];
    double len = view.pos_len_log(i);
    arcs.push_back({len, e.u, e.v, static_cast<std::uint32_t>(i)});
    arcs.push_back({len, e.v, e.u, static_cast<std::uint32_t>(i)});
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    if (a.len != b.len) return a.len < b.len;
    return a.w != b.w ? a.w < b.w : a.u < b.u;
  });

  TriangleSet out;
  for (const Arc& a : arcs) {
    if (marked[a.edge]) continue;
    const auto& l = lists[a.w];
    std::size_t self = detail::find_key(l, a.len, a.u);
    for (std::size_t j = self + 1; j < l.size(); ++j) {
      if (!(log_add3(a.len, l[j].len, 0.0) < view.limit_log)) break;
      if (marked[l[j].edge]) continue;
      Vertex v = l[j].v;
      if (g.has_edge(a.u, v)) continue;
      std::uint64_t nk = pair_key(a.u, v);
      if (marked_neg.count(nk)) continue;
      if (!(log_add3(a.len, l[j].len, view.neg_len_log(nk)) <
            view.limit_log))
        continue;
      marked[a.edge] = 1;
      marked[l[j].edge] = 1;
      marked_neg.insert(nk);
      out.triangles.push_back(canonical({a.u, a.w, v}));
      out.used_pos_edges.push_back(a.edge);
      out.used_pos_edges.push_back(l[j].edge);
      out.used_neg_pairs.push_back(nk);
      break;  // the arc's own edge is now consumed
    }
  }
  return out;
}

struct EngineStats {
  std::uint64_t rounds = 0;
  std::uint64_t resets = 0;  // excluding the bootstrap reset of round 0
  std::uint64_t max_doubles_between_resets = 0;
  std::uint64_t explored = 0;
  std::uint64_t candidates = 0;
  std::uint64_t selected = 0;
  std::uint64_t mis_rounds_max = 0;
};

struct EngineTraceRow {
  std::uint64_t round;
  std::int64_t r;  // exploration rate used in this round's window
  std::uint64_t active_arcs;
  std::uint64_t alive_sum;
  std::uint64_t candidates;
  std::uint64_t selected;
  bool reset;
};

inline void dump_engine_trace(const std::vector<EngineTraceRow>& rows,
                              std::ostream& out) {
  out << "round,r,active_arcs,alive_sum,candidates,selected,reset\n";
  for (const auto& r : rows)
    out << r.round << ',' << r.r << ',' << r.active_arcs << ',' << r.alive_sum
        << ',' << r.candidates << ',' << r.selected << ',' << (r.reset ? 1 : 0)
        << '\n';
}

/**
 * @brief Parallel maximal edge-disjoint eligible triangle set via
 * doubling/reset window exploration.
 *
 * Runs in bulk-synchronous rounds. Every arc (w,u) walks the static sorted
 * neighbor list of w in windows [idx+r, idx+2r-1]; the rate r doubles each
 * round, or resets to 1 (rebuilding the static lists from the live ones)
 * when the still-alive explored entries drop below |A|*r/4. Window
 * candidates pass through the conflict-graph MIS; chosen triangles consume
 * their three pairs. An arc retires when its own edge is consumed, its list
 * is exhausted, or sorted-order pruning shows no further partner can fit.
 *
 * Deterministic in (g, view, seed) for any worker count.
 */
inline TriangleSet parallel_maximal(const SignedGraph& g,
                                    const LengthView& view, std::uint64_t seed,
                                    int workers = 1,
                                    EngineStats* stats_out = nullptr,
                                    std::vector<EngineTraceRow>* trace =
                                        nullptr) {
  TriangleSet out;
  EngineStats stats;
  auto static_lists = detail::sorted_neighbor_lists(g, view);
  auto current = static_lists;

  std::vector<std::uint8_t> marked(g.num_edges(), 0);
  for (std::size_t i = 0; i < g.num_edges(); ++i)
    if (view.pos_marked(i)) marked[i] = 1;
  std::unordered_set<std::uint64_t> marked_neg;
  if (view.marked_neg) marked_neg = *view.marked_neg;

  struct Arc {
    Vertex w, u;
    std::uint32_t edge;
    double self_len;
    std::size_t base;    // index of u in the static list of w
    double cur_len;      // key of the last inspected neighbor
    Vertex cur_v;
  };
  std::vector<Arc> arcs;
  arcs.reserve(g.num_edges() * 2);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (marked[i]) continue;
    Edge e = g.edges()[i];
    double len = view.pos_len_log(i);
    auto mk = [&](Vertex w, Vertex u) {
      return Arc{w, u, static_cast<std::uint32_t>(i), len,
                 detail::find_key(static_lists[w], len, u), len, u};
    };
    arcs.push_back(mk(e.u, e.v));
    arcs.push_back(mk(e.v, e.u));
  }

  struct Candidate {
    OpenTriangle t;
    std::uint32_t e_wu, e_wv;
    std::uint64_t neg_key;
  };

  std::int64_t r2 = 1;  // twice the exploration rate; r = 1/2 initially
  std::uint64_t doubles_since_reset = 0;
  std::vector<std::uint64_t> alive_cnt;
  std::vector<std::vector<Candidate>> arc_cands;
  std::vector<std::uint8_t> survive;

  while (!arcs.empty()) {
    std::uint64_t round = stats.rounds++;

    // Part 1: count still-alive explored entries per arc, then reset or
    // double the exploration rate.
    alive_cnt.assign(arcs.size(), 0);
    parallel_for(arcs.size(), workers, [&](std::size_t i) {
      const Arc& a = arcs[i];
      const auto& l = current[a.w];
      // Entries with key in (self, cur] that are still present. upper_bound
      // tolerates cur pointing at a deleted entry.
      auto self_it = std::lower_bound(
          l.begin(), l.end(), detail::NbrEntry{a.self_len, a.u, 0},
          detail::entry_less);
      auto cur_it = std::upper_bound(
          l.begin(), l.end(), detail::NbrEntry{a.cur_len, a.cur_v, 0},
          detail::entry_less);
      CORRCLUST_ASSERT(self_it != l.end() && self_it->v == a.u,
                       "active arc missing from current list");
      alive_cnt[i] = static_cast<std::uint64_t>((cur_it - self_it) - 1);
#ifdef CORRCLUST_PARANOID
      std::uint64_t slow = 0;
      for (const auto& e : l)
        if (detail::key_less(e, a.cur_len, a.cur_v + 1) &&
            !detail::key_less(e, a.self_len, a.u + 1))
          ++slow;
      CORRCLUST_ASSERT(slow == alive_cnt[i],
                       "alive count mismatch vs rescan");
#endif
    });
    std::uint64_t alive_sum = 0;
    for (std::uint64_t c : alive_cnt) alive_sum += c;

    bool reset = 8 * alive_sum <
                 static_cast<std::uint64_t>(arcs.size()) *
                     static_cast<std::uint64_t>(r2);
    if (reset) {
      r2 = 2;
      for (Vertex w = 0; w < g.num_vertices(); ++w)
        static_lists[w] = current[w];
      parallel_for(arcs.size(), workers, [&](std::size_t i) {
        Arc& a = arcs[i];
        a.base = detail::find_key(static_lists[a.w], a.self_len, a.u);
        a.cur_len = a.self_len;
        a.cur_v = a.u;
      });
      if (round > 0) ++stats.resets;
      doubles_since_reset = 0;
    } else {
      r2 *= 2;
      ++doubles_since_reset;
      stats.max_doubles_between_resets =
          std::max(stats.max_doubles_between_resets, doubles_since_reset);
    }

    // Part 2: explore windows and collect eligible candidates.
    arc_cands.assign(arcs.size(), {});
    std::vector<std::uint64_t> explored_cnt(arcs.size(), 0);
    parallel_for(arcs.size(), workers, [&](std::size_t i) {
      Arc& a = arcs[i];
      const auto& l = static_lists[a.w];
      std::size_t lo = a.base + static_cast<std::size_t>(r2 / 2);
      std::size_t hi_excl =
          std::min(l.size(), a.base + static_cast<std::size_t>(r2));
      for (std::size_t j = lo; j < hi_excl; ++j) {
        ++explored_cnt[i];
        const detail::NbrEntry& e = l[j];
        if (marked[e.edge]) continue;
        if (g.has_edge(a.u, e.v)) continue;
        std::uint64_t nk = pair_key(a.u, e.v);
        if (marked_neg.count(nk)) continue;
        if (!(log_add3(a.self_len, e.len, view.neg_len_log(nk)) <
              view.limit_log))
          continue;
        arc_cands[i].push_back(
            {canonical({a.u, a.w, e.v}), a.edge, e.edge, nk});
      }
      if (hi_excl > lo) {
        a.cur_len = l[hi_excl - 1].len;
        a.cur_v = l[hi_excl - 1].v;
      }
    });
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      stats.explored += explored_cnt[i];
      for (const Candidate& c : arc_cands[i]) cands.push_back(c);
    }
    stats.candidates += cands.size();

    // Part 3: resolve conflicts, then consume the chosen triangles.
    std::vector<OpenTriangle> cand_tris;
    cand_tris.reserve(cands.size());
    for (const Candidate& c : cands) cand_tris.push_back(c.t);
    std::uint64_t mis_rounds = 0;
    auto chosen = detail::conflict_mis_indices(
        cand_tris, hash2(seed, round), &mis_rounds);
    stats.mis_rounds_max = std::max(stats.mis_rounds_max, mis_rounds);
    for (std::size_t i : chosen) {
      const Candidate& c = cands[i];
      CORRCLUST_ASSERT(!marked[c.e_wu] && !marked[c.e_wv] &&
                           !marked_neg.count(c.neg_key),
                       "conflict MIS returned overlapping triangles");
      marked[c.e_wu] = 1;
      marked[c.e_wv] = 1;
      marked_neg.insert(c.neg_key);
      out.triangles.push_back(c.t);
      out.used_pos_edges.push_back(c.e_wu);
      out.used_pos_edges.push_back(c.e_wv);
      out.used_neg_pairs.push_back(c.neg_key);
    }
    stats.selected += chosen.size();

    if (trace)
      trace->push_back({round, r2 / 2, arcs.size(), alive_sum, cands.size(),
                        chosen.size(), reset});

    // Part 4: drop consumed entries from the live lists and retire arcs
    // that are consumed, exhausted, or can be pruned by sorted order.
    parallel_for(g.num_vertices(), workers, [&](std::size_t w) {
      auto& l = current[w];
      l.erase(std::remove_if(
                  l.begin(), l.end(),
                  [&](const detail::NbrEntry& e) { return marked[e.edge]; }),
              l.end());
    });
    survive.assign(arcs.size(), 0);
    parallel_for(arcs.size(), workers, [&](std::size_t i) {
      const Arc& a = arcs[i];
      if (marked[a.edge]) return;
      std::size_t next = a.base + static_cast<std::size_t>(r2);
      const auto& l = static_lists[a.w];
      if (next >= l.size()) return;
      // Lists are sorted, so if the next entry cannot fit even with a
      // unit-length closing pair, no later entry can.
      if (!(log_add3(a.self_len, l[next].len, 0.0) < view.limit_log)) return;
      survive[i] = 1;
    });
    std::size_t keep = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (survive[i]) arcs[keep++] = arcs[i];
    arcs.resize(keep);
  }

  if (stats_out) *stats_out = stats;
  return out;
}

}  // namespace corrclust::engine
