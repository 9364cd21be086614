#pragma once

#include "hfree/graph.hpp"
#include "hfree/process.hpp"

#include <initializer_list>
#include <utility>

namespace testutil {

// 1-based edge list.
inline hfree::SimpleGraph graph(std::uint32_t n, std::initializer_list<std::pair<int, int>> edges) {
  auto g = hfree::SimpleGraph::new_empty(n);
  for (auto [u, v] : edges) g.add_edge(u - 1, v - 1);
  return g;
}

inline hfree::SimpleGraph complete(std::uint32_t n) {
  auto g = hfree::SimpleGraph::new_empty(n);
  for (hfree::Vertex u = 0; u < n; ++u)
    for (hfree::Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline hfree::SimpleGraph cycle(std::uint32_t n) {
  auto g = hfree::SimpleGraph::new_empty(n);
  for (hfree::Vertex u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

inline hfree::SimpleGraph petersen() {
  auto g = hfree::SimpleGraph::new_empty(10);
  for (hfree::Vertex i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

inline hfree::SimpleGraph random_graph(std::uint32_t n, std::uint32_t permille, std::uint64_t seed) {
  hfree::Rng rng(seed);
  auto g = hfree::SimpleGraph::new_empty(n);
  for (hfree::Vertex u = 0; u < n; ++u)
    for (hfree::Vertex v = u + 1; v < n; ++v)
      if (hfree::uniform_below(rng, 1000) < permille) g.add_edge(u, v);
  return g;
}

} // namespace testutil
