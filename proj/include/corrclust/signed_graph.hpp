#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corrclust/common.hpp"

namespace corrclust {

// Edge sign. A signed graph stores only its positive edges; every other
// vertex pair is implicitly negative and never materialized.
enum class Sign : std::uint8_t { plus, minus };

struct Edge {
  Vertex u, v;  // stored with u < v
};

inline bool operator==(Edge a, Edge b) { return a.u == b.u && a.v == b.v; }

// An open triangle (u, w, v): (w,u) and (w,v) are positive edges and the
// closing pair (u,v) is not. The center w is the middle component.
struct OpenTriangle {
  Vertex u, w, v;
};

inline bool operator==(OpenTriangle a, OpenTriangle b) {
  return a.u == b.u && a.w == b.w && a.v == b.v;
}

// Canonical form: endpoints ordered so that u < v. The center is fixed by
// the triangle itself, so this is a unique name for the unordered object.
inline OpenTriangle canonical(OpenTriangle t) {
  if (t.u > t.v) std::swap(t.u, t.v);
  return t;
}

/**
 * @brief A complete signed graph on vertices 0..n-1, represented by its
 * positive edge set.
 *
 * Vertex ids are dense 0-based integers. Adjacency lists are sorted
 * ascending, the edge list is sorted lexicographically, and edge indices are
 * stable, so every traversal of the structure is deterministic.
 */
class SignedGraph {
 public:
  static constexpr std::size_t npos_edge = static_cast<std::size_t>(-1);

  SignedGraph() = default;

  // Builds the graph from a positive edge list given in any order and
  // orientation. Rejects self loops, duplicates, and endpoints >= n.
  SignedGraph(Vertex n, std::vector<Edge> edges) : n_(n) {
    edges_.reserve(edges.size());
    for (Edge e : edges) {
      if (e.u == e.v)
        throw ConfigError("self loop at vertex " + std::to_string(e.u));
      if (e.u >= n || e.v >= n)
        throw ConfigError("edge endpoint out of range: " + std::to_string(e.u) +
                          " " + std::to_string(e.v));
      if (e.u > e.v) std::swap(e.u, e.v);
      edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](Edge a, Edge b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i)
      if (edges_[i] == edges_[i - 1])
        throw ConfigError("duplicate edge " + std::to_string(edges_[i].u) +
                          " " + std::to_string(edges_[i].v));
    edge_index_.reserve(edges_.size() * 2);
    std::vector<std::size_t> deg(n_, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      edge_index_.emplace(pair_key(edges_[i].u, edges_[i].v),
                          static_cast<std::uint32_t>(i));
      ++deg[edges_[i].u];
      ++deg[edges_[i].v];
    }
    offsets_.assign(n_ + 1, 0);
    for (Vertex v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adj_.resize(edges_.size() * 2);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (Edge e : edges_) {
      adj_[fill[e.u]++] = e.v;
      adj_[fill[e.v]++] = e.u;
    }
    for (Vertex v = 0; v < n_; ++v)
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }

  Vertex num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }

  std::uint64_t num_pairs() const {
    return static_cast<std::uint64_t>(n_) * (n_ - (n_ > 0 ? 1 : 0)) / 2;
  }

  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex w) const {
    return {adj_.data() + offsets_[w], adj_.data() + offsets_[w + 1]};
  }

  Vertex degree(Vertex w) const {
    return static_cast<Vertex>(offsets_[w + 1] - offsets_[w]);
  }

  bool has_edge(Vertex u, Vertex v) const {
    return edge_index_.count(pair_key(u, v)) != 0;
  }

  // Index into edges() for a positive pair, npos_edge otherwise.
  std::size_t edge_index(Vertex u, Vertex v) const {
    auto it = edge_index_.find(pair_key(u, v));
    return it == edge_index_.end() ? npos_edge : it->second;
  }

  Sign sign(Vertex u, Vertex v) const {
    return has_edge(u, v) ? Sign::plus : Sign::minus;
  }

  // Graphs with n <= 1 count as complete.
  bool is_complete_positive() const { return num_edges() == num_pairs(); }

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;  // CSR offsets into adj_, size n_+1
  std::vector<Vertex> adj_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_index_;
};

namespace detail {

inline IoError parse_error(const std::string& context, std::size_t line,
                           const std::string& what) {
  return IoError(context + ":" + std::to_string(line) + ": " + what);
}

// Strict unsigned parse: the whole token must be a decimal integer.
inline bool parse_u64(const std::string& tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  out = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    if (out > (std::numeric_limits<std::uint64_t>::max() - (c - '0')) / 10)
      return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

}  // namespace detail

// Reads the "n m" header followed by m lines "u v". Malformed content is an
// IoError carrying the offending line number; ids at or above n are rejected
// rather than compacted.
inline SignedGraph load_graph(std::istream& in,
                              const std::string& context = "<input>") {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out = line;
      return true;
    }
    return false;
  };
  std::string header;
  if (!next_line(header))
    throw detail::parse_error(context, lineno, "missing \"n m\" header");
  std::istringstream hs(header);
  std::string tok_n, tok_m, extra;
  std::uint64_t n = 0, m = 0;
  if (!(hs >> tok_n >> tok_m) || (hs >> extra) ||
      !detail::parse_u64(tok_n, n) || !detail::parse_u64(tok_m, m))
    throw detail::parse_error(context, lineno, "expected header \"n m\"");
  if (n > 0xffffffffULL)
    throw detail::parse_error(context, lineno, "vertex count out of range");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::string body;
    if (!next_line(body))
      throw detail::parse_error(context, lineno + 1,
                                "expected " + std::to_string(m) +
                                    " edges, file ended after " +
                                    std::to_string(i));
    std::istringstream es(body);
    std::string tok_u, tok_v;
    std::uint64_t u = 0, v = 0;
    if (!(es >> tok_u >> tok_v) || (es >> extra) ||
        !detail::parse_u64(tok_u, u) || !detail::parse_u64(tok_v, v))
      throw detail::parse_error(context, lineno, "expected edge \"u v\"");
    if (u >= n || v >= n)
      throw detail::parse_error(context, lineno, "vertex id out of range");
    if (u == v) throw detail::parse_error(context, lineno, "self loop");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  std::string tail;
  if (next_line(tail))
    throw detail::parse_error(context, lineno, "trailing content after edges");
  try {
    return SignedGraph(static_cast<Vertex>(n), std::move(edges));
  } catch (const ConfigError& e) {
    throw IoError(context + ": " + e.what());
  }
}

inline SignedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_graph(in, path);
}

inline void save_graph(const SignedGraph& g, std::ostream& out) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (Edge e : g.edges()) out << e.u << ' ' << e.v << '\n';
  if (!out) throw IoError("write failed");
}

inline void save_graph_file(const SignedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save_graph(g, out);
}

/**
 * @brief A partition of the vertex set, as one label per vertex.
 *
 * Labels are normalized: contiguous from 0 in order of first appearance when
 * scanning vertices in ascending id order.
 */
struct Clustering {
  std::vector<std::uint32_t> label;

  std::uint32_t num_clusters() const {
    std::uint32_t mx = 0;
    for (std::uint32_t l : label) mx = std::max(mx, l + 1);
    return label.empty() ? 0 : mx;
  }
};

inline bool operator==(const Clustering& a, const Clustering& b) {
  return a.label == b.label;
}

// Remaps arbitrary labels to the normalized form.
inline Clustering normalize_clustering(const std::vector<std::uint32_t>& raw) {
  Clustering c;
  c.label.resize(raw.size());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  remap.reserve(raw.size());
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < raw.size(); ++v) {
    auto [it, fresh] = remap.emplace(raw[v], next);
    if (fresh) ++next;
    c.label[v] = it->second;
  }
  return c;
}

// One line "v cluster_id" per vertex, ascending by vertex id.
inline void write_clustering(const Clustering& c, std::ostream& out) {
  for (std::size_t v = 0; v < c.label.size(); ++v)
    out << v << ' ' << c.label[v] << '\n';
  if (!out) throw IoError("write failed");
}

inline void write_clustering_file(const Clustering& c,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_clustering(c, out);
}

// Reads and normalizes a clustering for a graph on n vertices. Every vertex
// must appear exactly once.
inline Clustering read_clustering(std::istream& in, Vertex n,
                                  const std::string& context = "<input>") {
  std::vector<std::uint32_t> raw(n, 0);
  std::vector<bool> seen(n, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream es(line);
    std::string tok_v, tok_l, extra;
    std::uint64_t v = 0, l = 0;
    if (!(es >> tok_v >> tok_l) || (es >> extra) ||
        !detail::parse_u64(tok_v, v) || !detail::parse_u64(tok_l, l))
      throw detail::parse_error(context, lineno, "expected \"v cluster_id\"");
    if (v >= n) throw detail::parse_error(context, lineno, "vertex id out of range");
    if (l > 0xffffffffULL)
      throw detail::parse_error(context, lineno, "cluster id out of range");
    if (seen[v]) throw detail::parse_error(context, lineno, "duplicate vertex");
    seen[v] = true;
    raw[v] = static_cast<std::uint32_t>(l);
  }
  for (Vertex v = 0; v < n; ++v)
    if (!seen[v])
      throw IoError(context + ": vertex " + std::to_string(v) + " missing");
  return normalize_clustering(raw);
}

inline Clustering read_clustering_file(const std::string& path, Vertex n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_clustering(in, n, path);
}

/**
 * @brief Connected components of the positive graph, each as a standalone
 * SignedGraph over locally renumbered vertices.
 *
 * Components are ordered by their smallest original vertex; local id j of
 * component i corresponds to original vertex vertices[i][j] (ascending).
 */
struct Components {
  std::vector<SignedGraph> graphs;
  std::vector<std::vector<Vertex>> vertices;
  std::vector<std::uint32_t> component_of;  // per original vertex
};

inline Components components(const SignedGraph& g) {
  Components out;
  Vertex n = g.num_vertices();
  out.component_of.assign(n, 0xffffffffu);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (out.component_of[s] != 0xffffffffu) continue;
    std::uint32_t id = static_cast<std::uint32_t>(out.graphs.size());
    std::vector<Vertex> members;
    stack.push_back(s);
    out.component_of[s] = id;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (out.component_of[w] != 0xffffffffu) continue;
        out.component_of[w] = id;
        stack.push_back(w);
      }
    }
    std::sort(members.begin(), members.end());
    std::unordered_map<Vertex, Vertex> local;
    local.reserve(members.size());
    for (std::size_t j = 0; j < members.size(); ++j)
      local.emplace(members[j], static_cast<Vertex>(j));
    std::vector<Edge> edges;
    for (Vertex v : members)
      for (Vertex w : g.neighbors(v))
        if (v < w) edges.push_back({local[v], local[w]});
    out.graphs.emplace_back(static_cast<Vertex>(members.size()),
                            std::move(edges));
    out.vertices.push_back(std::move(members));
  }
  return out;
}

enum class GenKind { planted, gnp_signed };

inline GenKind gen_kind_from_string(const std::string& s) {
  if (s == "planted") return GenKind::planted;
  if (s == "gnp-signed") return GenKind::gnp_signed;
  throw ConfigError("unknown generator kind: " + s);
}

namespace detail {
inline constexpr std::uint64_t kGenTag = 0x67656e31ULL;  // "gen1"
}

// Deterministic instance generator; a pure function of its arguments.
//   planted:    k balanced ground-truth clusters (contiguous blocks), pair
//               signs flipped independently with probability param.
//   gnp-signed: each pair positive independently with probability param.
inline SignedGraph generate(GenKind kind, Vertex n, double param,
                            std::uint64_t seed, std::uint32_t clusters = 2) {
  if (!(param >= 0.0 && param <= 1.0))
    throw ConfigError("generator parameter must lie in [0, 1]");
  if (kind == GenKind::planted && (clusters == 0 || (n > 0 && clusters > n)))
    throw ConfigError("cluster count must lie in [1, n]");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      double coin = uniform01(hash3(seed, detail::kGenTag, pair_key(u, v)));
      bool positive;
      if (kind == GenKind::planted) {
        std::uint64_t bu = static_cast<std::uint64_t>(u) * clusters / n;
        std::uint64_t bv = static_cast<std::uint64_t>(v) * clusters / n;
        positive = (bu == bv) != (coin < param);
      } else {
        positive = coin < param;
      }
      if (positive) edges.push_back({u, v});
    }
  }
  return SignedGraph(n, std::move(edges));
}

}  // namespace corrclust
