#pragma once

#include <cstdint>
#include <vector>

#include "corrclust/signed_graph.hpp"

namespace corrclust::testutil {

inline SignedGraph make_path(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, static_cast<Vertex>(v + 1)});
  return SignedGraph(n, edges);
}

inline SignedGraph make_cycle(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, static_cast<Vertex>(v + 1)});
  edges.push_back({0, static_cast<Vertex>(n - 1)});
  return SignedGraph(n, edges);
}

// Star with the hub at vertex 0 and `leaves` leaves.
inline SignedGraph make_star(Vertex leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return SignedGraph(leaves + 1, edges);
}

inline SignedGraph make_complete(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return SignedGraph(n, edges);
}

}  // namespace corrclust::testutil
