#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treestab/graph.hpp"
#include "treestab/tree.hpp"

namespace treestab {
// Brute-force oracles used to audit the main modules. Deliberately written
// from the definitions with no shared construction code.
namespace oracle {

// Exact subtree containment via backtracking over all anchor choices.
struct ContainResult {
    bool contains = false;
    bool exhausted = true;  // false when the node budget ran out ("no" unreliable)
    std::vector<int> image; // tree-ambient indexed when contains
};
ContainResult contains_tree(const Graph& g, const RootedTree& t,
                            long long budget = 50'000'000);

// Exact min cut ratio by enumerating all bipartitions (n <= ~24).
struct ExactCut {
    Q density = Q(0);
    VertexSet worst_side;
};
ExactCut exact_min_cut_ratio(const Graph& g);

// Branch and bound minimum vertex cover.
struct CoverResult {
    VertexSet cover;
    bool optimal = true;     // false when budget exceeded (cover still valid)
    long long lower_bound = 0;
};
CoverResult min_vertex_cover(const Graph& g, long long budget = 10'000'000);

bool is_vertex_cover(const Graph& g, const VertexSet& cover);

// All d-edge trees up to isomorphism, as rooted trees on 0..d.
std::vector<RootedTree> all_trees_with_edges(int d);

struct ScanReport {
    int n_max = 0;
    int d_max = 0;
    long long graphs_checked = 0;
    std::vector<std::pair<Graph, RootedTree>> counterexamples;
    double runtime_seconds = 0.0;  // reported out of band, never in primary JSON
};

// Exhaustive desk-scale check that every labeled graph on n <= n_max vertices
// with e > (d-1)n/2 contains every d-edge tree (d <= d_max).
ScanReport erdos_sos_scan(int n_max, int d_max);

enum class ExtremalKind { DisjointCliques, Regular, DominatingSetJoin };

// The classical tight constructions: n/d disjoint K_d, a (d-1)-regular
// circulant, or (d-1)/2 dominating vertices over an independent set.
Graph generate_extremal(ExtremalKind kind, int n, int d);

}  // namespace oracle
}  // namespace treestab
