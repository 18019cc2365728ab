#pragma once

#include <vector>

#include "treestab/graph.hpp"

namespace treestab {

// Rooted tree over a fixed label space [0, ambient_n). Like Graph, subtrees
// produced by splitting keep their original labels so that piece embeddings
// can be recombined by label.
struct RootedTree {
    int ambient_n = 0;
    int root = -1;
    VertexSet verts;            // sorted
    std::vector<int> parent;    // ambient-indexed; -1 for root, -2 for absent
    std::vector<std::vector<int>> children;  // ambient-indexed, ascending

    static RootedTree from_parents(int n, int root, const std::vector<int>& parent);
    static RootedTree path_tree(int n);      // 0-1-2-...-(n-1), rooted at 0
    static RootedTree star_tree(int leaves); // root 0 with `leaves` children
    // Perfect arity-ary tree of the given height (height 0 = single vertex).
    static RootedTree perfect_tree(int arity, int height);

    int order() const { return static_cast<int>(verts.size()); }
    long long tree_edge_count() const { return order() > 0 ? order() - 1 : 0; }
    bool has_vertex(int v) const;
    int degree(int v) const;    // children + (v != root)
    int max_degree() const;

    std::vector<int> bfs_order() const;  // root first; children visited ascending
    int depth(int v) const;              // root = 0
    int height() const;

    // Vertices of the subtree hanging at v (including v).
    VertexSet subtree_vertices(int v) const;
    // Subtree rooted at v, original labels kept.
    RootedTree subtree_at(int v) const;
    // Restriction to a label subset that must itself be connected and contain
    // new_root; parents outside the subset are cut.
    RootedTree restricted_to(const VertexSet& s, int new_root) const;

    Graph as_graph() const;  // underlying undirected tree
};

// Parse the on-disk tree format (see io.hpp); validates acyclicity/connectivity.
RootedTree tree_from_edges(int n, int root, const EdgeSet& edges);

}  // namespace treestab
