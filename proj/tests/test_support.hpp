// Shared generators for randomized property tests.  Everything is seeded
// through treestab::Rng so a failing case can be replayed from its seed.
#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "treestab/graph.hpp"
#include "treestab/rng.hpp"
#include "treestab/tree.hpp"

namespace testsup {

// Erdos-Renyi style graph on vertices 0..n-1; each pair kept with
// probability percent/100.
inline treestab::Graph random_graph(int n, int percent, unsigned long long seed) {
  treestab::Rng rng(seed);
  std::vector<treestab::Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.chance(treestab::q_of(percent, 100))) edges.push_back({u, v});
    }
  }
  return treestab::Graph::make(n, edges);
}

// Random spanning tree (random parent among earlier vertices) plus
// `extra` additional distinct edges, so the result is always connected.
inline treestab::Graph random_connected_graph(int n, int extra,
                                              unsigned long long seed) {
  treestab::Rng rng(seed);
  std::vector<treestab::Edge> edges;
  for (int v = 1; v < n; ++v) {
    int p = static_cast<int>(rng.below(static_cast<unsigned long long>(v)));
    edges.push_back({p, v});
  }
  std::sort(edges.begin(), edges.end());
  int placed = 0;
  int attempts = 0;
  while (placed < extra && attempts < 20 * (extra + 1)) {
    ++attempts;
    int u = static_cast<int>(rng.below(static_cast<unsigned long long>(n)));
    int v = static_cast<int>(rng.below(static_cast<unsigned long long>(n)));
    if (u == v) continue;
    treestab::Edge e{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it != edges.end() && *it == e) continue;
    edges.insert(it, e);
    ++placed;
  }
  return treestab::Graph::make(n, edges);
}

// Random rooted tree on 0..n-1 with max degree at most max_deg (>= 2).
// Vertex v attaches to a uniformly chosen earlier vertex that still has
// degree headroom.
inline treestab::RootedTree random_tree(int n, int max_deg,
                                        unsigned long long seed) {
  treestab::Rng rng(seed);
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  parent[0] = -1;
  for (int v = 1; v < n; ++v) {
    std::vector<int> open;
    for (int u = 0; u < v; ++u) {
      if (degree[static_cast<std::size_t>(u)] < max_deg) open.push_back(u);
    }
    int p = open[static_cast<std::size_t>(
        rng.below(static_cast<unsigned long long>(open.size())))];
    parent[static_cast<std::size_t>(v)] = p;
    ++degree[static_cast<std::size_t>(p)];
    ++degree[static_cast<std::size_t>(v)];
  }
  return treestab::RootedTree::from_parents(n, 0, parent);
}

// Disjoint union of `count` copies of K_k, vertices laid out consecutively.
inline treestab::Graph clique_blocks(int count, int k) {
  std::vector<treestab::Edge> edges;
  for (int b = 0; b < count; ++b) {
    int base = b * k;
    for (int u = 0; u < k; ++u) {
      for (int v = u + 1; v < k; ++v) edges.push_back({base + u, base + v});
    }
  }
  return treestab::Graph::make(count * k, edges);
}

}  // namespace testsup
