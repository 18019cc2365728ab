#include "treestab/graph.hpp"

#include <algorithm>
#include <numeric>

#include "treestab/errors.hpp"

namespace treestab {

namespace {

void build_adjacency(Graph& g) {
    g.adj.assign(static_cast<std::size_t>(g.ambient_n), {});
    for (const auto& [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& list : g.adj) std::sort(list.begin(), list.end());
}

}  // namespace

Graph Graph::make(int n, EdgeSet edges) {
    VertexSet verts(static_cast<std::size_t>(n));
    std::iota(verts.begin(), verts.end(), 0);
    return make_on(n, std::move(verts), std::move(edges));
}

Graph Graph::make_on(int ambient_n, VertexSet verts, EdgeSet edges) {
    Graph g;
    g.ambient_n = ambient_n;
    g.verts = std::move(verts);
    std::sort(g.verts.begin(), g.verts.end());
    if (std::adjacent_find(g.verts.begin(), g.verts.end()) != g.verts.end())
        throw ValidationError("duplicate vertex in vertex set");
    if (!g.verts.empty() && (g.verts.front() < 0 || g.verts.back() >= ambient_n))
        throw ValidationError("vertex id outside ambient range");
    for (auto& [u, v] : edges) {
        if (u == v) throw ValidationError("self-loop " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (!std::binary_search(g.verts.begin(), g.verts.end(), u) ||
            !std::binary_search(g.verts.begin(), g.verts.end(), v))
            throw ValidationError("edge endpoint not in vertex set: " + std::to_string(u) +
                                  "-" + std::to_string(v));
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ValidationError("duplicate edge");
    g.edges = std::move(edges);
    build_adjacency(g);
    return g;
}

Graph Graph::complete(int n) {
    EdgeSet edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return make(n, std::move(edges));
}

Graph Graph::empty_graph(int n) { return make(n, {}); }

Graph Graph::path_graph(int n) {
    EdgeSet edges;
    for (int u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    return make(n, std::move(edges));
}

Graph Graph::cycle_graph(int n) {
    if (n < 3) throw ValidationError("cycle needs >= 3 vertices");
    EdgeSet edges;
    for (int u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    edges.emplace_back(0, n - 1);
    return make(n, std::move(edges));
}

Graph Graph::star_graph(int leaves) {
    EdgeSet edges;
    for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return make(leaves + 1, std::move(edges));
}

Graph Graph::disjoint_union(const std::vector<Graph>& parts) {
    int total = 0;
    EdgeSet edges;
    for (const auto& part : parts) {
        // Consecutive relabeling: part vertex verts[i] becomes total + i.
        std::vector<int> re(static_cast<std::size_t>(part.ambient_n), -1);
        for (int i = 0; i < part.order(); ++i) re[part.verts[i]] = total + i;
        for (const auto& [u, v] : part.edges) edges.emplace_back(re[u], re[v]);
        total += part.order();
    }
    return make(total, std::move(edges));
}

bool Graph::has_vertex(int v) const {
    return v >= 0 && v < ambient_n && std::binary_search(verts.begin(), verts.end(), v);
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= ambient_n || v >= ambient_n) return false;
    const auto& list = adj[u];
    return std::binary_search(list.begin(), list.end(), v);
}

int Graph::min_degree() const {
    int best = 0;
    bool first = true;
    for (int v : verts) {
        int d = degree(v);
        if (first || d < best) best = d;
        first = false;
    }
    return best;
}

int Graph::max_degree() const {
    int best = 0;
    for (int v : verts) best = std::max(best, degree(v));
    return best;
}

Graph Graph::induced(const VertexSet& s) const {
    VertexSet keep = set_intersect(verts, s);
    EdgeSet kept;
    for (const auto& [u, v] : edges)
        if (set_contains(keep, u) && set_contains(keep, v)) kept.emplace_back(u, v);
    return make_on(ambient_n, std::move(keep), std::move(kept));
}

Graph Graph::without_vertices(const VertexSet& s) const {
    return induced(set_minus(verts, s));
}

Graph Graph::without_edges(const EdgeSet& es) const {
    EdgeSet sorted = es;
    for (auto& [u, v] : sorted)
        if (u > v) std::swap(u, v);
    std::sort(sorted.begin(), sorted.end());
    EdgeSet kept;
    for (const auto& e : edges)
        if (!std::binary_search(sorted.begin(), sorted.end(), e)) kept.push_back(e);
    return make_on(ambient_n, verts, std::move(kept));
}

Graph Graph::union_with(const Graph& other) const {
    int amb = std::max(ambient_n, other.ambient_n);
    VertexSet vs = set_union(verts, other.verts);
    EdgeSet es = edges;
    es.insert(es.end(), other.edges.begin(), other.edges.end());
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    return make_on(amb, std::move(vs), std::move(es));
}

bool Graph::is_subgraph_of(const Graph& host) const {
    for (int v : verts)
        if (!host.has_vertex(v)) return false;
    for (const auto& [u, v] : edges)
        if (!host.has_edge(u, v)) return false;
    return true;
}

std::vector<Graph> Graph::components() const {
    std::vector<int> comp(static_cast<std::size_t>(ambient_n), -1);
    int count = 0;
    for (int start : verts) {
        if (comp[start] != -1) continue;
        std::vector<int> stack{start};
        comp[start] = count;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (comp[w] == -1) {
                    comp[w] = count;
                    stack.push_back(w);
                }
        }
        ++count;
    }
    std::vector<VertexSet> buckets(static_cast<std::size_t>(count));
    for (int v : verts) buckets[comp[v]].push_back(v);
    std::vector<EdgeSet> bucket_edges(static_cast<std::size_t>(count));
    for (const auto& e : edges) bucket_edges[comp[e.first]].push_back(e);
    std::vector<Graph> result;
    result.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        result.push_back(make_on(ambient_n, std::move(buckets[i]), std::move(bucket_edges[i])));
    return result;
}

bool Graph::connected() const { return order() <= 1 || components().size() == 1; }

Graph min_degree_peel(const Graph& g, const Q& x) {
    if (Q(Int(g.edge_count())) < x * Int(g.order()))
        throw PreconditionError("min_degree_peel: e(g) < x*|g|");
    long long cut = floor_ll(x);
    Graph cur = g;
    // Removing a vertex of degree <= x preserves e >= x|G|, so the peel stops
    // at a nonempty subgraph whenever x > 0.
    for (;;) {
        int victim = -1;
        for (int v : cur.verts)
            if (cur.degree(v) <= cut) {
                victim = v;
                break;
            }
        if (victim == -1) break;
        if (cur.order() == 1) return Graph::make_on(cur.ambient_n, {}, {});
        cur = cur.without_vertices({victim});
    }
    return cur;
}

Graph peel_below(const Graph& g, long long cut) {
    Graph cur = g;
    for (;;) {
        VertexSet victims;
        for (int v : cur.verts)
            if (cur.degree(v) <= cut) victims.push_back(v);
        if (victims.empty()) return cur;
        cur = cur.without_vertices(victims);
    }
}

Graph densest_component(const Graph& g) {
    auto comps = g.components();
    if (comps.empty()) return g;
    const Graph* best = &comps[0];
    for (const auto& c : comps) {
        long long lhs = c.edge_count() * best->order();
        long long rhs = best->edge_count() * c.order();
        if (lhs > rhs || (lhs == rhs && c.verts.front() < best->verts.front())) best = &c;
    }
    return *best;
}

long long edge_count_between(const Graph& g, const VertexSet& s, const VertexSet& t) {
    long long count = 0;
    for (const auto& [u, v] : g.edges) {
        bool us = set_contains(s, u), vs = set_contains(s, v);
        bool ut = set_contains(t, u), vt = set_contains(t, v);
        if ((us && vt) || (ut && vs)) ++count;
    }
    return count;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_minus(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool set_contains(const VertexSet& a, int v) {
    return std::binary_search(a.begin(), a.end(), v);
}

}  // namespace treestab
