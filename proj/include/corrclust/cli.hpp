#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrclust/common.hpp"
#include "corrclust/pipeline.hpp"
#include "corrclust/reference_oracles.hpp"

namespace corrclust::cli {

// Everything a subcommand can consume, flat. Unused fields are simply
// ignored by subcommands that do not register the corresponding flags.
struct RunConfig {
  std::string input = "-";
  std::string output = "-";
  std::string stats;  // optional JSON sidecar; empty = do not write
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string engine = "parallel";
  // gen
  std::string kind = "planted";
  std::uint64_t n = 12;
  double param = 0.15;
  std::uint64_t clusters = 2;
  // round / eval
  std::string fractional;
  std::string clustering;
  // bench
  std::uint64_t instances = 20;
  std::uint64_t rounding_seeds = 100;
  // analyze-grid
  std::uint64_t grid = 201;
};

namespace detail {

template <class Fn>
void with_input(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cin, std::string("stdin"));
    return;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  fn(in, path);
}

inline void write_output(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << data;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

inline SignedGraph load_input_graph(const RunConfig& cfg) {
  SignedGraph g(1, {});
  with_input(cfg.input,
             [&](std::istream& in, const std::string& ctx) {
               g = load_graph(in, ctx);
             });
  return g;
}

inline void maybe_write_stats(const RunConfig& cfg, const nlohmann::json& j) {
  if (cfg.stats.empty()) return;
  write_output(cfg.stats, j.dump(2) + "\n");
}

inline constexpr std::uint64_t kBenchTag = 0x626e6368ULL;   // "bnch"
inline constexpr std::uint64_t kBenchRTag = 0x626e7264ULL;  // "bnrd"

// key=value configuration file, applied before flag parsing so that flags
// and CORRCLUST_* environment variables both override it.
inline void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  auto as_f64 = [](const std::string& v, double& out) { out = std::stod(v); };
  auto as_u64 = [](const std::string& v, std::uint64_t& out) {
    out = std::stoull(v);
  };
  auto as_int = [](const std::string& v, int& out) { out = std::stoi(v); };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      std::size_t x = s.find_first_not_of(" \t");
      std::size_t y = s.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "epsilon") as_f64(val, cfg.epsilon);
      else if (key == "param") as_f64(val, cfg.param);
      else if (key == "seed") as_u64(val, cfg.seed);
      else if (key == "n") as_u64(val, cfg.n);
      else if (key == "clusters") as_u64(val, cfg.clusters);
      else if (key == "instances") as_u64(val, cfg.instances);
      else if (key == "rounding-seeds" || key == "rounding_seeds")
        as_u64(val, cfg.rounding_seeds);
      else if (key == "grid") as_u64(val, cfg.grid);
      else if (key == "workers") as_int(val, cfg.workers);
      else if (key == "input") cfg.input = val;
      else if (key == "output") cfg.output = val;
      else if (key == "stats") cfg.stats = val;
      else if (key == "engine") cfg.engine = val;
      else if (key == "kind") cfg.kind = val;
      else if (key == "fractional") cfg.fractional = val;
      else if (key == "clustering") cfg.clustering = val;
      else
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": unknown key " + key);
    } catch (const std::invalid_argument&) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": bad value for " + key);
    } catch (const std::out_of_range&) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": bad value for " + key);
    }
  }
}

inline std::string find_config_arg(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  if (const char* env = std::getenv("CORRCLUST_CONFIG")) return env;
  return {};
}

}  // namespace detail

// One line per pair with a nonzero LP value: "u v + z" for positive edges
// (all of them appear) and "u v - z" for touched negative pairs.
inline std::string dump_fractional(const SignedGraph& g,
                                   const solver::FractionalSolution& fs) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    os << g.edges()[e].u << ' ' << g.edges()[e].v << " + " << fs.z_pos[e]
       << '\n';
  std::vector<std::pair<std::uint64_t, double>> negs(fs.z_neg.begin(),
                                                     fs.z_neg.end());
  std::sort(negs.begin(), negs.end());
  for (auto [key, z] : negs)
    os << pair_lo(key) << ' ' << pair_hi(key) << " - " << z << '\n';
  return os.str();
}

inline solver::FractionalSolution parse_fractional(std::istream& in,
                                                   const SignedGraph& g,
                                                   const std::string& ctx) {
  solver::FractionalSolution fs;
  fs.z_pos.assign(g.num_edges(), 0.0);
  std::vector<std::uint8_t> seen(g.num_edges(), 0);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) -> IoError {
    return IoError(ctx + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::uint64_t u = 0, v = 0;
    std::string sign;
    double z = 0.0;
    if (!(ls >> u >> v >> sign >> z) || !(ls >> std::ws).eof())
      throw fail("expected 'u v sign z'");
    if (u >= g.num_vertices() || v >= g.num_vertices() || u == v)
      throw fail("invalid pair");
    if (!(z >= 0.0 && z <= 1.0)) throw fail("value outside [0, 1]");
    Vertex a = static_cast<Vertex>(u), b = static_cast<Vertex>(v);
    if (sign == "+") {
      std::size_t e = g.edge_index(a, b);
      if (e == SignedGraph::npos_edge)
        throw fail("pair is not a positive edge");
      if (seen[e]) throw fail("duplicate entry");
      seen[e] = 1;
      fs.z_pos[e] = z;
    } else if (sign == "-") {
      if (g.has_edge(a, b)) throw fail("pair is a positive edge");
      if (!fs.z_neg.emplace(pair_key(a, b), z).second)
        throw fail("duplicate entry");
    } else {
      throw fail("sign must be '+' or '-'");
    }
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (!seen[e])
      throw IoError(ctx + ": missing value for positive edge " +
                    std::to_string(g.edges()[e].u) + " " +
                    std::to_string(g.edges()[e].v));
  double sum = 0.0;
  for (double z : fs.z_pos) sum += z;
  std::vector<std::pair<std::uint64_t, double>> negs(fs.z_neg.begin(),
                                                     fs.z_neg.end());
  std::sort(negs.begin(), negs.end());
  for (auto [key, z] : negs) sum += z;
  fs.objective = sum;
  fs.support_size = g.num_edges() + fs.z_neg.size();
  return fs;
}

inline int cmd_gen(const RunConfig& cfg) {
  SignedGraph g = generate(gen_kind_from_string(cfg.kind),
                           static_cast<Vertex>(cfg.n), cfg.param, cfg.seed,
                           static_cast<std::uint32_t>(cfg.clusters));
  std::ostringstream os;
  save_graph(g, os);
  detail::write_output(cfg.output, os.str());
  return 0;
}

inline int cmd_solve(const RunConfig& cfg) {
  SignedGraph g = detail::load_input_graph(cfg);
  solver::SolverConfig sc;
  sc.epsilon = cfg.epsilon;
  sc.seed = cfg.seed;
  sc.engine = solver::engine_kind_from_string(cfg.engine);
  sc.workers = cfg.workers;
  auto [fs, dc, st] = solver::solve_primal2(g, sc);
  detail::write_output(cfg.output, dump_fractional(g, fs));
  nlohmann::json j{{"epsilon", cfg.epsilon},
                   {"seed", cfg.seed},
                   {"iterations", st.iterations},
                   {"updates", st.updates},
                   {"alpha_bumps", st.alpha_bumps},
                   {"engine_resets", st.engine_resets},
                   {"alpha_final_log", st.alpha_final_log},
                   {"primal_obj", fs.objective},
                   {"dual_obj", dc.objective},
                   {"max_congestion", dc.max_congestion()},
                   {"support_size", fs.support_size},
                   {"solve_ms", st.wall_time_ms}};
  detail::maybe_write_stats(cfg, j);
  return 0;
}

inline int cmd_round(const RunConfig& cfg) {
  SignedGraph g = detail::load_input_graph(cfg);
  if (cfg.fractional.empty())
    throw ConfigError("round requires --fractional");
  solver::FractionalSolution fs;
  detail::with_input(cfg.fractional,
                     [&](std::istream& in, const std::string& ctx) {
                       fs = parse_fractional(in, g, ctx);
                     });
  rounding::Assignment a = rounding::assignment_from_fractional(g, fs);
  rounding::RoundingStats rs;
  Clustering c = rounding::round_assignment(g, a, cfg.seed, cfg.workers, &rs);
  std::ostringstream os;
  write_clustering(c, os);
  detail::write_output(cfg.output, os.str());
  nlohmann::json j{{"seed", cfg.seed},
                   {"coin_draws", rs.coin_draws},
                   {"kept_pos", rs.kept_pos},
                   {"kept_neg", rs.kept_neg},
                   {"pivot_rounds", rs.pivot_rounds},
                   {"num_clusters", c.num_clusters()},
                   {"cost", analysis::disagreements(g, c)}};
  detail::maybe_write_stats(cfg, j);
  return 0;
}

inline int cmd_cluster(const RunConfig& cfg) {
  SignedGraph g = detail::load_input_graph(cfg);
  pipeline::ClusterConfig pc;
  pc.epsilon = cfg.epsilon;
  pc.seed = cfg.seed;
  pc.workers = cfg.workers;
  pc.engine = solver::engine_kind_from_string(cfg.engine);
  pipeline::ClusterReport rep = pipeline::cluster_graph(g, pc);
  std::ostringstream os;
  write_clustering(rep.clustering, os);
  detail::write_output(cfg.output, os.str());
  nlohmann::json j{{"epsilon", cfg.epsilon},
                   {"seed", cfg.seed},
                   {"workers", cfg.workers},
                   {"cost", rep.cost},
                   {"num_clusters", rep.clustering.num_clusters()},
                   {"primal_obj", rep.primal_obj},
                   {"dual_obj", rep.dual_obj},
                   {"iterations", rep.iterations},
                   {"support_size", rep.support_size},
                   {"engine_resets", rep.engine_resets},
                   {"components", rep.components},
                   {"solved_components", rep.solved_components},
                   {"complete_components", rep.complete_components},
                   {"solve_ms", rep.solve_ms},
                   {"round_ms", rep.round_ms}};
  detail::maybe_write_stats(cfg, j);
  return 0;
}

inline int cmd_eval(const RunConfig& cfg) {
  SignedGraph g = detail::load_input_graph(cfg);
  if (cfg.clustering.empty()) throw ConfigError("eval requires --clustering");
  Clustering c;
  detail::with_input(cfg.clustering,
                     [&](std::istream& in, const std::string& ctx) {
                       c = read_clustering(in, g.num_vertices(), ctx);
                     });
  std::uint64_t cost = analysis::disagreements(g, c);
  detail::write_output(cfg.output, std::to_string(cost) + "\n");
  nlohmann::json j{{"cost", cost}, {"num_clusters", c.num_clusters()}};
  detail::maybe_write_stats(cfg, j);
  return 0;
}

// Runs both maximal-set engines on the input graph at unit lengths and
// checks their output against the exhaustive oracle.
inline int cmd_verify(const RunConfig& cfg) {
  SignedGraph g = detail::load_input_graph(cfg);
  engine::LengthView view;
  view.limit_log = kLog3 + std::log1p(cfg.epsilon);
  std::ostringstream os;
  bool all_ok = true;
  auto check = [&](const std::string& name, const engine::TriangleSet& s) {
    oracles::VerifyResult r = oracles::verify_maximal(g, view, s);
    all_ok = all_ok && r.ok;
    os << name << ": " << (r.ok ? "ok" : "FAIL " + r.reason)
       << " size=" << s.triangles.size() << '\n';
  };
  check("greedy", engine::greedy_maximal(g, view));
  engine::EngineStats es;
  check("parallel", engine::parallel_maximal(g, view, cfg.seed, cfg.workers,
                                             &es));
  os << "parallel rounds=" << es.rounds << " resets=" << es.resets << '\n';
  detail::write_output(cfg.output, os.str());
  return all_ok ? 0 : 1;
}

/**
 * @brief Seed sweep on planted instances; emits one CSV row per instance
 * with the mean rounded cost against the exact optimum.
 */
inline int cmd_bench(const RunConfig& cfg) {
  if (cfg.n > 12)
    throw ConfigError("bench needs n <= 12 so the exact optimum is in reach");
  if (cfg.rounding_seeds == 0) throw ConfigError("need rounding seeds");
  std::ostringstream os;
  os.precision(10);
  os << "instance,n,m,opt,mean_cost,cost_over_opt,primal_obj,dual_obj\n";
  for (std::uint64_t i = 0; i < cfg.instances; ++i) {
    std::uint64_t inst_seed = hash3(cfg.seed, detail::kBenchTag, i);
    SignedGraph g = generate(GenKind::planted, static_cast<Vertex>(cfg.n),
                             cfg.param, inst_seed,
                             static_cast<std::uint32_t>(cfg.clusters));
    std::uint64_t opt = oracles::brute_force_opt(g);
    pipeline::ClusterConfig pc;
    pc.epsilon = cfg.epsilon;
    pc.workers = cfg.workers;
    pc.engine = solver::engine_kind_from_string(cfg.engine);
    double cost_sum = 0.0, primal = 0.0, dual = 0.0;
    for (std::uint64_t r = 0; r < cfg.rounding_seeds; ++r) {
      pc.seed = hash3(inst_seed, detail::kBenchRTag, r);
      pipeline::ClusterReport rep = pipeline::cluster_graph(g, pc);
      cost_sum += static_cast<double>(rep.cost);
      primal = rep.primal_obj;
      dual = rep.dual_obj;
    }
    double mean = cost_sum / static_cast<double>(cfg.rounding_seeds);
    os << i << ',' << cfg.n << ',' << g.num_edges() << ',' << opt << ','
       << mean << ',';
    if (opt > 0)
      os << mean / static_cast<double>(opt);
    else
      os << (mean == 0.0 ? "1" : "inf");
    os << ',' << primal << ',' << dual << '\n';
  }
  detail::write_output(cfg.output, os.str());
  return 0;
}

inline int cmd_reduce_demo(const RunConfig& cfg) {
  SignedGraph h = detail::load_input_graph(cfg);
  std::uint64_t reps = 0;
  bool detected = oracles::triangle_detect_reduction(h, cfg.seed, &reps);
  bool actual = false;
  for (const Edge& e : h.edges()) {
    for (Vertex w : h.neighbors(e.u))
      if (w != e.v && h.has_edge(w, e.v)) {
        actual = true;
        break;
      }
    if (actual) break;
  }
  std::ostringstream os;
  os << "detected=" << detected << " actual=" << actual << " reps=" << reps
     << '\n';
  detail::write_output(cfg.output, os.str());
  nlohmann::json j{{"detected", detected}, {"actual", actual}, {"reps", reps}};
  detail::maybe_write_stats(cfg, j);
  // The reduction promises one-sided error; a false positive is a bug.
  if (detected && !actual) return 1;
  return 0;
}

/**
 * @brief Grid scan of the triangle cost algebra: for each sign pattern the
 * maximum slack of its guarantee over a uniform grid, plus the tightness
 * witness. CSV columns: type,metric,value,a,b,c.
 */
inline int cmd_analyze_grid(const RunConfig& cfg) {
  if (cfg.grid < 2) throw ConfigError("grid must have at least 2 points");
  std::size_t steps = cfg.grid;
  auto at = [&](std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(steps - 1);
  };
  std::ostringstream os;
  os.precision(17);
  os << "type,metric,value,a,b,c\n";
  struct Scan {
    const char* name;
    analysis::TriangleType ty;
    double lp_factor;     // guarantee: ALG <= lp_factor * LP
    bool open_only;       // restrict to a + b >= c (feasible open triples)
  };
  const Scan scans[] = {
      {"++-", {Sign::plus, Sign::plus, Sign::minus}, 2.4, true},
      {"+++", {Sign::plus, Sign::plus, Sign::plus}, 2.4, false},
      {"+--", {Sign::plus, Sign::minus, Sign::minus}, 2.0, false},
      {"---", {Sign::minus, Sign::minus, Sign::minus}, 1.0, false},
  };
  for (const Scan& sc : scans) {
    double worst = -1e300, wa = 0, wb = 0, wc = 0;
    for (std::size_t ia = 0; ia < steps; ++ia)
      for (std::size_t ib = 0; ib < steps; ++ib)
        for (std::size_t ic = 0; ic < steps; ++ic) {
          double a = at(ia), b = at(ib), c = at(ic);
          if (sc.open_only && a + b < c) continue;
          analysis::AlgLp r = analysis::alg_lp_triangle(sc.ty, a, b, c);
          double slack = r.alg - sc.lp_factor * r.lp;
          if (slack > worst) {
            worst = slack;
            wa = a;
            wb = b;
            wc = c;
          }
        }
    os << sc.name << ",max_slack_vs_" << sc.lp_factor << ',' << worst << ','
       << wa << ',' << wb << ',' << wc << '\n';
  }
  analysis::TriangleType wt{Sign::plus, Sign::plus, Sign::minus};
  os << "++-,witness_c,"
     << analysis::c_function(wt, 0.5, 0.5, 1.0) << ",0.5,0.5,1\n";
  os << "++-,witness_ratio,"
     << analysis::alg_lp_ratio(wt, 0.5, 0.5, 1.0) << ",0.5,0.5,1\n";
  detail::write_output(cfg.output, os.str());
  return 0;
}

/**
 * @brief Argument parsing and dispatch. Precedence per option: command-line
 * flag, then CORRCLUST_* environment variable, then --config file key, then
 * built-in default.
 */
inline int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  try {
    std::string config_path = detail::find_config_arg(argc, argv);
    if (!config_path.empty()) detail::apply_config_file(config_path, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  std::string config_path_sink;
  CLI::App app{"correlation clustering toolkit"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* s) {
    s->add_option("--input", cfg.input, "input graph file or '-' for stdin")
        ->envname("CORRCLUST_INPUT");
    s->add_option("--output", cfg.output, "output file or '-' for stdout")
        ->envname("CORRCLUST_OUTPUT");
    s->add_option("--stats", cfg.stats, "write run statistics JSON here")
        ->envname("CORRCLUST_STATS");
    s->add_option("--epsilon", cfg.epsilon, "LP accuracy parameter")
        ->envname("CORRCLUST_EPSILON");
    s->add_option("--seed", cfg.seed, "random seed")
        ->envname("CORRCLUST_SEED");
    s->add_option("--workers", cfg.workers, "worker threads")
        ->envname("CORRCLUST_WORKERS");
    s->add_option("--engine", cfg.engine,
                  "maximal-set engine: parallel or greedy")
        ->envname("CORRCLUST_ENGINE");
    s->add_option("--config", config_path_sink,
                  "key=value configuration file (already applied)");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a signed graph");
  add_common(gen);
  gen->add_option("--kind", cfg.kind, "planted or gnp-signed")
      ->envname("CORRCLUST_KIND");
  gen->add_option("--n", cfg.n, "vertex count")->envname("CORRCLUST_N");
  gen->add_option("--param", cfg.param, "noise / edge probability")
      ->envname("CORRCLUST_PARAM");
  gen->add_option("--clusters", cfg.clusters, "planted cluster count")
      ->envname("CORRCLUST_CLUSTERS");

  CLI::App* solve = app.add_subcommand("solve", "solve the two-hop LP");
  add_common(solve);

  CLI::App* round =
      app.add_subcommand("round", "round a fractional solution");
  add_common(round);
  round->add_option("--fractional", cfg.fractional,
                    "fractional solution file ('-' for stdin)")
      ->envname("CORRCLUST_FRACTIONAL");

  CLI::App* cluster =
      app.add_subcommand("cluster", "full pipeline: solve + round");
  add_common(cluster);

  CLI::App* eval = app.add_subcommand("eval", "count disagreements");
  add_common(eval);
  eval->add_option("--clustering", cfg.clustering, "clustering file")
      ->envname("CORRCLUST_CLUSTERING");

  CLI::App* verify =
      app.add_subcommand("verify", "check the maximal-set engines");
  add_common(verify);

  CLI::App* bench = app.add_subcommand("bench", "seed sweep, CSV output");
  add_common(bench);
  bench->add_option("--kind", cfg.kind)->envname("CORRCLUST_KIND");
  bench->add_option("--n", cfg.n, "vertex count (<= 12)")
      ->envname("CORRCLUST_N");
  bench->add_option("--param", cfg.param, "planted noise")
      ->envname("CORRCLUST_PARAM");
  bench->add_option("--clusters", cfg.clusters)->envname("CORRCLUST_CLUSTERS");
  bench->add_option("--instances", cfg.instances, "instance count")
      ->envname("CORRCLUST_INSTANCES");
  bench->add_option("--rounding-seeds", cfg.rounding_seeds,
                    "rounding seeds per instance")
      ->envname("CORRCLUST_ROUNDING_SEEDS");

  CLI::App* reduce = app.add_subcommand(
      "reduce-demo", "triangle detection through the eligibility engine");
  add_common(reduce);

  CLI::App* grid =
      app.add_subcommand("analyze-grid", "triangle cost algebra grid scan");
  add_common(grid);
  grid->add_option("--grid", cfg.grid, "points per axis")
      ->envname("CORRCLUST_GRID");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(gen)) return cmd_gen(cfg);
    if (app.got_subcommand(solve)) return cmd_solve(cfg);
    if (app.got_subcommand(round)) return cmd_round(cfg);
    if (app.got_subcommand(cluster)) return cmd_cluster(cfg);
    if (app.got_subcommand(eval)) return cmd_eval(cfg);
    if (app.got_subcommand(verify)) return cmd_verify(cfg);
    if (app.got_subcommand(bench)) return cmd_bench(cfg);
    if (app.got_subcommand(reduce)) return cmd_reduce_demo(cfg);
    if (app.got_subcommand(grid)) return cmd_analyze_grid(cfg);
    throw ConfigError("no subcommand");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace corrclust::cli
