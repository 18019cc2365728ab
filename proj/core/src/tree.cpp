#include "treestab/tree.hpp"

#include <algorithm>
#include <deque>

#include "treestab/errors.hpp"

namespace treestab {

namespace {

void rebuild_children(RootedTree& t) {
    t.children.assign(static_cast<std::size_t>(t.ambient_n), {});
    for (int v : t.verts)
        if (v != t.root && t.parent[v] >= 0) t.children[t.parent[v]].push_back(v);
    for (auto& c : t.children) std::sort(c.begin(), c.end());
}

}  // namespace

RootedTree RootedTree::from_parents(int n, int root, const std::vector<int>& parent) {
    if (root < 0 || root >= n) throw ValidationError("root outside range");
    RootedTree t;
    t.ambient_n = n;
    t.root = root;
    t.verts.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t.verts[i] = i;
    t.parent.assign(static_cast<std::size_t>(n), -2);
    for (int v = 0; v < n; ++v) {
        if (v == root) {
            t.parent[v] = -1;
            continue;
        }
        int p = parent[v];
        if (p < 0 || p >= n || p == v) throw ValidationError("bad parent of " + std::to_string(v));
        t.parent[v] = p;
    }
    rebuild_children(t);
    // Acyclicity/connectivity: every vertex must reach the root.
    for (int v = 0; v < n; ++v) {
        int steps = 0, cur = v;
        while (cur != root) {
            cur = t.parent[cur];
            if (cur < 0 || ++steps > n) throw ValidationError("parent map is not a tree");
        }
    }
    return t;
}

RootedTree RootedTree::path_tree(int n) {
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    for (int v = 1; v < n; ++v) parent[v] = v - 1;
    return from_parents(n, 0, parent);
}

RootedTree RootedTree::star_tree(int leaves) {
    std::vector<int> parent(static_cast<std::size_t>(leaves + 1), 0);
    return from_parents(leaves + 1, 0, parent);
}

RootedTree RootedTree::perfect_tree(int arity, int height) {
    std::vector<int> parent{-1};
    std::vector<int> frontier{0};
    for (int level = 0; level < height; ++level) {
        std::vector<int> next;
        for (int p : frontier)
            for (int c = 0; c < arity; ++c) {
                next.push_back(static_cast<int>(parent.size()));
                parent.push_back(p);
            }
        frontier = std::move(next);
    }
    return from_parents(static_cast<int>(parent.size()), 0, parent);
}

bool RootedTree::has_vertex(int v) const {
    return v >= 0 && v < ambient_n && parent[v] != -2;
}

int RootedTree::degree(int v) const {
    return static_cast<int>(children[v].size()) + (v == root ? 0 : 1);
}

int RootedTree::max_degree() const {
    int best = 0;
    for (int v : verts) best = std::max(best, degree(v));
    return best;
}

std::vector<int> RootedTree::bfs_order() const {
    std::vector<int> order;
    if (root < 0) return order;
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (int c : children[v]) queue.push_back(c);
    }
    return order;
}

int RootedTree::depth(int v) const {
    int d = 0;
    while (v != root) {
        v = parent[v];
        ++d;
    }
    return d;
}

int RootedTree::height() const {
    int best = 0;
    for (int v : verts) best = std::max(best, depth(v));
    return best;
}

VertexSet RootedTree::subtree_vertices(int v) const {
    VertexSet out;
    std::vector<int> stack{v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        out.push_back(u);
        for (int c : children[u]) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

RootedTree RootedTree::subtree_at(int v) const {
    return restricted_to(subtree_vertices(v), v);
}

RootedTree RootedTree::restricted_to(const VertexSet& s, int new_root) const {
    if (!set_contains(s, new_root)) throw ValidationError("new root not in subset");
    RootedTree t;
    t.ambient_n = ambient_n;
    t.root = new_root;
    t.verts = s;
    t.parent.assign(static_cast<std::size_t>(ambient_n), -2);
    for (int v : s) {
        if (v == new_root) {
            t.parent[v] = -1;
            continue;
        }
        int p = parent[v];
        if (p < 0 || !set_contains(s, p))
            throw ValidationError("subset not connected under parents at " + std::to_string(v));
        t.parent[v] = p;
    }
    rebuild_children(t);
    return t;
}

Graph RootedTree::as_graph() const {
    EdgeSet edges;
    for (int v : verts)
        if (v != root && parent[v] >= 0)
            edges.emplace_back(std::min(v, parent[v]), std::max(v, parent[v]));
    return Graph::make_on(ambient_n, verts, std::move(edges));
}

RootedTree tree_from_edges(int n, int root, const EdgeSet& edges) {
    if (static_cast<int>(edges.size()) != n - 1)
        throw ValidationError("tree needs exactly n-1 edges");
    Graph g = Graph::make(n, edges);
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> queue{root};
    seen[root] = true;
    int visited = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        ++visited;
        for (int w : g.neighbors(v))
            if (!seen[w]) {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
    }
    if (visited != n) throw ValidationError("edge list is not a connected tree");
    return RootedTree::from_parents(n, root, parent);
}

}  // namespace treestab
