#pragma once

#include <string>
#include <utility>
#include <vector>

#include "treestab/rational.hpp"

namespace treestab {

using Edge = std::pair<int, int>;             // normalized u < v
using VertexSet = std::vector<int>;           // sorted, unique
using EdgeSet = std::vector<Edge>;            // sorted, unique

// Simple undirected graph. Vertex ids live in a fixed ambient label space
// [0, ambient_n); `verts` lists the vertices actually present. Subgraphs
// (induced, peeled, components, clump cores, ...) keep their original labels,
// so embeddings and covers compose across modules without translation.
struct Graph {
    int ambient_n = 0;
    VertexSet verts;
    EdgeSet edges;
    std::vector<std::vector<int>> adj;  // ambient-indexed, sorted neighbor lists

    Graph() = default;

    // Full vertex set 0..n-1 with the given edges (validated + normalized).
    static Graph make(int n, EdgeSet edges);
    // Explicit vertex subset of a larger label space.
    static Graph make_on(int ambient_n, VertexSet verts, EdgeSet edges);

    static Graph complete(int n);
    static Graph empty_graph(int n);
    static Graph path_graph(int n);
    static Graph cycle_graph(int n);
    static Graph star_graph(int leaves);  // vertex 0 = center
    static Graph disjoint_union(const std::vector<Graph>& parts);  // relabels consecutively

    int order() const { return static_cast<int>(verts.size()); }
    long long edge_count() const { return static_cast<long long>(edges.size()); }
    bool has_vertex(int v) const;
    bool has_edge(int u, int v) const;
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    const std::vector<int>& neighbors(int v) const { return adj[v]; }
    int min_degree() const;  // over present vertices; 0 for empty graph
    int max_degree() const;

    Graph induced(const VertexSet& s) const;
    Graph without_vertices(const VertexSet& s) const;
    Graph without_edges(const EdgeSet& es) const;
    // Union of vertex/edge sets; ambient spaces must agree (max taken).
    Graph union_with(const Graph& other) const;
    bool is_subgraph_of(const Graph& host) const;

    std::vector<Graph> components() const;
    bool connected() const;
};

// Fact: a graph with e(G) >= x|G| has a subgraph H with e(H) >= x|H| and
// delta(H) >= floor(x)+1, found by peeling minimum-degree vertices
// (lowest index first). Throws PreconditionError when e(g) < x|g|.
Graph min_degree_peel(const Graph& g, const Q& x);

// Peel without the precondition: repeatedly delete vertices of degree <= cut
// until none remain; may return an empty graph.
Graph peel_below(const Graph& g, long long cut);

// Largest-ratio connected component (ties: smallest minimum vertex index).
Graph densest_component(const Graph& g);

// e(S,T): edges with one endpoint in s and the other in t; edges inside the
// intersection counted once.
long long edge_count_between(const Graph& g, const VertexSet& s, const VertexSet& t);

// Set helpers (inputs sorted).
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersect(const VertexSet& a, const VertexSet& b);
VertexSet set_minus(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& a, int v);

}  // namespace treestab
