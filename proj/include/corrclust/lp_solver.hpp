#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "corrclust/common.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/triangle_engine.hpp"

namespace corrclust::solver {

enum class EngineKind { parallel, greedy };

inline EngineKind engine_kind_from_string(const std::string& s) {
  if (s == "parallel") return EngineKind::parallel;
  if (s == "greedy") return EngineKind::greedy;
  throw ConfigError("unknown engine kind: " + s);
}

struct SolverConfig {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  // 0 selects the default cap: 10x the proven iteration bound. Exceeding the
  // cap is an internal error (the bound should never be reached).
  std::uint64_t max_iterations_guard = 0;
  EngineKind engine = EngineKind::parallel;
  int workers = 1;
  // If the run ends before the potential ever reaches m^3/eps, no iteration
  // qualifies for the snapshot window. With this flag the extraction falls
  // back to the best ratio over all iterations; that fallback carries no
  // guarantee on alpha and is off by default.
  bool allow_argmin_fallback = false;
};

struct SolverStats {
  std::uint64_t iterations = 0;   // loop passes: length updates + alpha bumps
  std::uint64_t updates = 0;
  std::uint64_t alpha_bumps = 0;
  std::uint64_t engine_resets = 0;  // summed over parallel engine calls
  double alpha_final_log = 0.0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  std::uint64_t support_size = 0;
  double wall_time_ms = 0.0;
};

// Sparse primal solution: every positive edge carries a value; negative
// pairs appear only when their final value is nonzero.
struct FractionalSolution {
  std::vector<double> z_pos;  // by edge index
  std::unordered_map<std::uint64_t, double> z_neg;
  double objective = 0.0;
  std::uint64_t support_size = 0;
};

// Feasible dual: per-edge congestion is increment_count * eps^2/ln m and
// never exceeds 1. Kept as exact integer counts.
struct DualCertificate {
  double objective = 0.0;
  double increment = 0.0;  // eps^2 / ln m, the per-selection flow quantum
  std::vector<std::int64_t> k_pos;
  std::unordered_map<std::uint64_t, std::int64_t> k_neg;

  double max_congestion() const {
    std::int64_t k = 0;
    for (std::int64_t v : k_pos) k = std::max(k, v);
    for (const auto& [key, v] : k_neg) k = std::max(k, v);
    return static_cast<double>(k) * increment;
  }
};

/**
 * @brief Mutable state of the steepest-descent solver.
 *
 * All lengths live in log space via exact integer increment counts:
 * log l_e = k_e * eps, so l_e = (m^{1/eps})^{cong_e} with
 * cong_e = k_e * eps^2/ln m holds identically and comparisons never drift.
 * The potential Phi = sum of all pair lengths is tracked as a log value,
 * updated incrementally and recomputed from scratch every 1000 updates.
 */
class SolverState {
 public:
  SolverState(const SignedGraph& g, SolverConfig cfg) : g_(g), cfg_(cfg) {
    std::uint64_t m = g.num_edges();
    if (!(cfg_.epsilon > 0.0) || cfg_.epsilon > 0.1)
      throw ConfigError("epsilon must lie in (0, 1/10]");
    // The approximation lemmas additionally need eps >= 2/m. For m < 20
    // that range is empty, so the bound is enforced only when meaningful.
    if (m >= 20 && cfg_.epsilon < 2.0 / static_cast<double>(m))
      throw ConfigError("epsilon below 2/m for this graph");
    if (g.is_complete_positive())
      throw ConfigError("graph is complete-positive; caller must short-cut");
    check_connected();
    if (cfg_.workers < 1) throw ConfigError("workers must be >= 1");

    eps_ = cfg_.epsilon;
    log_m_ = std::log(static_cast<double>(m));
    log1p_eps_ = std::log1p(eps_);
    log_expm1_eps_ = std::log(std::expm1(eps_));
    dual_increment_ = eps_ * eps_ / log_m_;
    stop_log_ = log_m_ / eps_ - eps_;             // log(m^{1/eps}/exp(eps))
    tmin_threshold_log_ = 3.0 * log_m_ - std::log(eps_);  // log(m^3/eps)
    if (cfg_.max_iterations_guard == 0) {
      double bound = 2000.0 * std::pow(eps_, -4.0) * log_m_ * log_m_;
      guard_ = bound >= 1e18 ? static_cast<std::uint64_t>(1e18)
                             : static_cast<std::uint64_t>(bound) + 1;
    } else {
      guard_ = cfg_.max_iterations_guard;
    }

    k_pos_.assign(m, 0);
    loglen_pos_.assign(m, 0.0);
    log_phi_ = std::log(static_cast<double>(g.num_pairs()));
    process_boundary();
  }

  const SignedGraph& graph() const { return g_; }
  const SolverConfig& config() const { return cfg_; }
  std::uint64_t iteration() const { return iter_; }
  std::uint64_t updates() const { return updates_; }
  std::uint64_t alpha_bumps() const { return alpha_bumps_; }
  std::uint64_t engine_resets() const { return engine_resets_; }
  std::int64_t alpha_steps() const { return alpha_steps_; }
  double epsilon() const { return eps_; }
  double log_alpha() const { return kLog3 + alpha_steps_ * log1p_eps_; }
  double limit_log() const { return log_alpha() + log1p_eps_; }
  double log_phi() const { return log_phi_; }
  bool tmin_seen() const { return tmin_seen_; }
  std::uint64_t tmin_iteration() const { return tmin_iter_; }
  bool snapshot_available() const { return snap_valid_; }
  std::uint64_t best_iteration() const { return snap_iter_; }
  const std::vector<std::int64_t>& k_pos() const { return k_pos_; }
  const std::unordered_map<std::uint64_t, std::int64_t>& k_neg() const {
    return k_neg_;
  }
  double dual_objective() const { return dual_increment_ * dual_increments_; }
  std::int64_t max_increment_count() const {
    std::int64_t k = 0;
    for (std::int64_t v : k_pos_) k = std::max(k, v);
    for (const auto& [key, v] : k_neg_) k = std::max(k, v);
    return k;
  }
  double max_congestion() const {
    return static_cast<double>(max_increment_count()) * dual_increment_;
  }

  bool finished() const { return log_phi_ >= stop_log_; }

  // Current lengths for the triangle engine; limit is (1+eps)*alpha.
  engine::LengthView length_view() const {
    engine::LengthView v;
    v.pos_log_len = &loglen_pos_;
    v.neg_log_len = &loglen_neg_;
    v.limit_log = limit_log();
    return v;
  }

  // One pass of the main loop: select a maximal edge-disjoint eligible set;
  // either push flow through it (lengths on its edges grow by exp(eps)) or,
  // when none is eligible, raise alpha by (1+eps).
  void run_iteration() {
    CORRCLUST_ASSERT(!finished(), "run_iteration called after termination");
    if (iter_ >= guard_)
      throw BudgetError(
          "internal error: solver exceeded its iteration guard; "
          "this indicates a bug, the iteration lemma bounds the loop");

    engine::TriangleSet s = find_maximal();
    if (!s.triangles.empty()) {
      // Phi gains (exp(eps)-1) * (total current length of touched edges).
      LogSumExp touched;
      for (std::uint32_t e : s.used_pos_edges) touched.add(loglen_pos_[e]);
      for (std::uint64_t key : s.used_neg_pairs) touched.add(neg_loglen(key));
      log_phi_ = log_add(log_phi_, log_expm1_eps_ + touched.value());

      for (std::uint32_t e : s.used_pos_edges) {
        ++k_pos_[e];
        if (k_pos_[e] == 1) ++nonzero_pos_;
        loglen_pos_[e] = static_cast<double>(k_pos_[e]) * eps_;
      }
      for (std::uint64_t key : s.used_neg_pairs) {
        std::int64_t k = ++k_neg_[key];
        loglen_neg_[key] = static_cast<double>(k) * eps_;
      }
      dual_increments_ += static_cast<double>(s.triangles.size());
      ++updates_;
      if (updates_ % 1000 == 0) recompute_phi();
    } else {
      ++alpha_steps_;
      ++alpha_bumps_;
    }
    ++iter_;
    process_boundary();
  }

  /**
   * @brief Final primal solution from the best snapshot.
   *
   * z_e = l_e/alpha at the snapshot iteration; positive edges then gain
   * eps/m and clamp to 1; negative pairs truncate to 0 unless their length
   * moved, which keeps the support sparse.
   */
  FractionalSolution extract_primal() const {
    const Snapshot* snap = nullptr;
    if (snap_valid_) {
      snap = &snap_;
    } else if (cfg_.allow_argmin_fallback && fallback_valid_) {
      snap = &fallback_;
    } else {
      throw std::logic_error(
          "no snapshot: the potential never reached m^3/eps, so no "
          "iteration qualifies (see allow_argmin_fallback)");
    }
    double log_alpha_t = kLog3 + snap->alpha_steps * log1p_eps_;
    double m = static_cast<double>(g_.num_edges());
    FractionalSolution out;
    out.z_pos.resize(g_.num_edges());
    double sum = 0.0;
    for (std::size_t e = 0; e < out.z_pos.size(); ++e) {
      double z = std::exp(static_cast<double>(snap->k_pos[e]) * eps_ -
                          log_alpha_t);
      out.z_pos[e] = std::min(z + eps_ / m, 1.0);
      sum += out.z_pos[e];
    }
    // Touched negatives, in sorted key order so the float sum is stable no
    // matter how the hash map happens to be laid out.
    std::vector<std::pair<std::uint64_t, std::int64_t>> touched(
        snap->k_neg.begin(), snap->k_neg.end());
    std::sort(touched.begin(), touched.end());
    for (auto [key, k] : touched) {
      CORRCLUST_ASSERT(k > 0, "untouched negative pair stored in snapshot");
      double z =
          std::min(std::exp(static_cast<double>(k) * eps_ - log_alpha_t), 1.0);
      out.z_neg.emplace(key, z);
      sum += z;
    }
    out.objective = sum;
    out.support_size = g_.num_edges() + out.z_neg.size();
    return out;
  }

  DualCertificate dual_certificate() const {
    DualCertificate d;
    d.objective = dual_objective();
    d.increment = dual_increment_;
    d.k_pos = k_pos_;
    d.k_neg = k_neg_;
    return d;
  }

  SolverStats stats() const {
    SolverStats st;
    st.iterations = iter_;
    st.updates = updates_;
    st.alpha_bumps = alpha_bumps_;
    st.engine_resets = engine_resets_;
    st.alpha_final_log = log_alpha();
    st.dual_obj = dual_objective();
    return st;
  }

 private:
  struct Snapshot {
    std::vector<std::int64_t> k_pos;
    std::unordered_map<std::uint64_t, std::int64_t> k_neg;
    std::int64_t alpha_steps = 0;
  };

  void check_connected() const {
    Vertex n = g_.num_vertices();
    if (n == 0) throw ConfigError("empty graph");
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g_.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          ++cnt;
          stack.push_back(w);
        }
    }
    if (cnt != n)
      throw ConfigError("graph is disconnected; caller must pre-split");
  }

  double neg_loglen(std::uint64_t key) const {
    auto it = loglen_neg_.find(key);
    return it == loglen_neg_.end() ? 0.0 : it->second;
  }

  engine::TriangleSet find_maximal() {
    engine::LengthView view = length_view();
    if (cfg_.engine == EngineKind::greedy)
      return engine::greedy_maximal(g_, view);
    engine::EngineStats es;
    engine::TriangleSet s = engine::parallel_maximal(
        g_, view, hash3(cfg_.seed, kEngineTag, iter_), cfg_.workers, &es);
    engine_resets_ += es.resets;
    return s;
  }

  // Candidate/threshold bookkeeping at the boundary after iteration t
  // (and once for t = 0). T_min is the first boundary where Phi >= m^3/eps;
  // from then on the snapshot chases the minimum of Phi/alpha, which only
  // improves right after alpha bumps, so few copies happen in practice.
  void process_boundary() {
    if (!tmin_seen_ && log_phi_ >= tmin_threshold_log_) {
      tmin_seen_ = true;
      tmin_iter_ = iter_;
    }
    double ratio = log_phi_ - log_alpha();
    if (tmin_seen_ && (!snap_valid_ || ratio < snap_ratio_)) {
      snap_ratio_ = ratio;
      snap_iter_ = iter_;
      snap_ = {k_pos_, k_neg_, alpha_steps_};
      snap_valid_ = true;
    }
    if (cfg_.allow_argmin_fallback &&
        (!fallback_valid_ || ratio < fallback_ratio_)) {
      fallback_ratio_ = ratio;
      fallback_ = {k_pos_, k_neg_, alpha_steps_};
      fallback_valid_ = true;
    }
  }

  void recompute_phi() {
    LogSumExp lse;
    std::uint64_t untouched =
        g_.num_pairs() - nonzero_pos_ - loglen_neg_.size();
    lse.add_scaled(0.0, static_cast<double>(untouched));
    for (std::size_t e = 0; e < loglen_pos_.size(); ++e)
      if (k_pos_[e] > 0) lse.add(loglen_pos_[e]);
    std::vector<std::pair<std::uint64_t, double>> touched(
        loglen_neg_.begin(), loglen_neg_.end());
    std::sort(touched.begin(), touched.end());
    for (auto [key, len] : touched) lse.add(len);
    double fresh = lse.value();
    CORRCLUST_ASSERT(
        std::abs(fresh - log_phi_) <= 1e-9 * std::max(1.0, std::abs(fresh)),
        "incremental Phi drifted from recomputed value");
    log_phi_ = fresh;
  }

  static constexpr std::uint64_t kEngineTag = 0x656e6731ULL;  // "eng1"

  const SignedGraph& g_;
  SolverConfig cfg_;
  double eps_ = 0.0;
  double log_m_ = 0.0;
  double log1p_eps_ = 0.0;
  double log_expm1_eps_ = 0.0;
  double dual_increment_ = 0.0;
  double stop_log_ = 0.0;
  double tmin_threshold_log_ = 0.0;
  std::uint64_t guard_ = 0;

  std::vector<std::int64_t> k_pos_;
  std::vector<double> loglen_pos_;
  std::unordered_map<std::uint64_t, std::int64_t> k_neg_;
  std::unordered_map<std::uint64_t, double> loglen_neg_;
  std::uint64_t nonzero_pos_ = 0;
  double log_phi_ = kNegInf;
  std::int64_t alpha_steps_ = 0;
  double dual_increments_ = 0.0;
  std::uint64_t iter_ = 0;
  std::uint64_t updates_ = 0;
  std::uint64_t alpha_bumps_ = 0;
  std::uint64_t engine_resets_ = 0;

  bool tmin_seen_ = false;
  std::uint64_t tmin_iter_ = 0;
  bool snap_valid_ = false;
  double snap_ratio_ = 0.0;
  std::uint64_t snap_iter_ = 0;
  Snapshot snap_;
  bool fallback_valid_ = false;
  double fallback_ratio_ = 0.0;
  Snapshot fallback_;
};

inline void run_iteration(SolverState& state) { state.run_iteration(); }

inline FractionalSolution extract_primal(const SolverState& state) {
  return state.extract_primal();
}

inline double dual_objective(const SolverState& state) {
  return state.dual_objective();
}

inline std::tuple<FractionalSolution, DualCertificate, SolverStats>
solve_primal2(const SignedGraph& g, const SolverConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  SolverState state(g, cfg);
  while (!state.finished()) state.run_iteration();
  FractionalSolution fs = state.extract_primal();
  DualCertificate dc = state.dual_certificate();
  SolverStats st = state.stats();
  st.primal_obj = fs.objective;
  st.dual_obj = dc.objective;
  st.support_size = fs.support_size;
  st.wall_time_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return {std::move(fs), dc, st};
}

}  // namespace corrclust::solver
