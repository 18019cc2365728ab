#include "treestab/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treestab/errors.hpp"

namespace treestab {
namespace oracle {

namespace {

Edge norm_edge(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

}  // namespace

ContainResult contains_tree(const Graph& g, const RootedTree& t, long long budget) {
    ContainResult res;
    if (t.order() == 0) {
        res.contains = true;
        return res;
    }
    if (g.order() < t.order()) return res;

    const std::vector<int> order = t.bfs_order();
    std::vector<int> image(static_cast<std::size_t>(t.ambient_n), -1);
    std::vector<char> used(static_cast<std::size_t>(g.ambient_n), 0);
    long long nodes = 0;
    bool aborted = false;

    std::function<bool(std::size_t)> place = [&](std::size_t idx) -> bool {
        if (idx == order.size()) return true;
        const int v = order[idx];
        const int p = t.parent[v];
        const std::vector<int>& pool = (p < 0) ? g.verts : g.neighbors(image[p]);
        for (int c : pool) {
            if (used[c] || g.degree(c) < t.degree(v)) continue;
            if (++nodes > budget) {
                aborted = true;
                return false;
            }
            image[v] = c;
            used[c] = 1;
            if (place(idx + 1)) return true;
            used[c] = 0;
            image[v] = -1;
            if (aborted) return false;
        }
        return false;
    };

    res.contains = place(0);
    res.exhausted = !aborted;
    if (res.contains) res.image = image;
    return res;
}

ExactCut exact_min_cut_ratio(const Graph& g) {
    ExactCut out;
    const int n = g.order();
    if (n < 2) return out;

    bool first = true;
    std::vector<char> in_b(static_cast<std::size_t>(g.ambient_n), 0);
    // Fix verts[0] on the A side; masks enumerate nonempty B subsets of the rest.
    const std::uint64_t top = std::uint64_t(1) << (n - 1);
    for (std::uint64_t mask = 1; mask < top; ++mask) {
        std::fill(in_b.begin(), in_b.end(), 0);
        int b_size = 0;
        for (int i = 0; i + 1 < n; ++i)
            if (mask >> i & 1) {
                in_b[g.verts[static_cast<std::size_t>(i) + 1]] = 1;
                ++b_size;
            }
        long long cross = 0;
        for (const Edge& e : g.edges)
            if (in_b[e.first] != in_b[e.second]) ++cross;
        const Q density(Int(cross), Int(b_size) * Int(n - b_size));
        if (first || density < out.density) {
            first = false;
            out.density = density;
            out.worst_side.clear();
            for (int v : g.verts)
                if (in_b[v]) out.worst_side.push_back(v);
        }
    }
    return out;
}

bool is_vertex_cover(const Graph& g, const VertexSet& cover) {
    for (const Edge& e : g.edges)
        if (!set_contains(cover, e.first) && !set_contains(cover, e.second)) return false;
    return true;
}

namespace {

// Greedy maximal matching size: a lower bound on the vertex cover.
long long matching_bound(const Graph& g) {
    std::vector<char> hit(static_cast<std::size_t>(g.ambient_n), 0);
    long long m = 0;
    for (const Edge& e : g.edges)
        if (!hit[e.first] && !hit[e.second]) {
            hit[e.first] = hit[e.second] = 1;
            ++m;
        }
    return m;
}

int busiest_vertex(const Graph& g) {
    int best = -1, best_deg = -1;
    for (int v : g.verts)
        if (g.degree(v) > best_deg) {
            best = v;
            best_deg = g.degree(v);
        }
    return best;
}

}  // namespace

CoverResult min_vertex_cover(const Graph& g, long long budget) {
    CoverResult out;
    out.lower_bound = matching_bound(g);

    // Greedy cover: always-valid incumbent even if the budget cuts search off.
    VertexSet best;
    {
        Graph cur = g;
        while (cur.edge_count() > 0) {
            const int v = busiest_vertex(cur);
            best.push_back(v);
            cur = cur.without_vertices({v});
        }
        std::sort(best.begin(), best.end());
    }

    long long nodes = 0;
    bool aborted = false;
    std::function<void(const Graph&, VertexSet&)> search = [&](const Graph& cur,
                                                               VertexSet& chosen) {
        if (aborted) return;
        if (++nodes > budget) {
            aborted = true;
            return;
        }
        if (cur.edge_count() == 0) {
            if (chosen.size() < best.size()) {
                best = chosen;
                std::sort(best.begin(), best.end());
            }
            return;
        }
        if (static_cast<long long>(chosen.size()) + matching_bound(cur) >=
            static_cast<long long>(best.size()))
            return;
        const int v = busiest_vertex(cur);
        // Branch 1: v in the cover.
        chosen.push_back(v);
        search(cur.without_vertices({v}), chosen);
        chosen.pop_back();
        // Branch 2: v excluded, so all its neighbors are forced in.
        VertexSet forced = cur.neighbors(v);
        VertexSet gone = forced;
        gone.push_back(v);
        std::sort(gone.begin(), gone.end());
        const std::size_t mark = chosen.size();
        for (int w : forced) chosen.push_back(w);
        search(cur.without_vertices(gone), chosen);
        chosen.resize(mark);
    };
    VertexSet chosen;
    search(g, chosen);

    out.cover = best;
    out.optimal = !aborted;
    return out;
}

namespace {

EdgeSet prufer_decode(const std::vector<int>& seq, int n) {
    std::vector<int> deg(static_cast<std::size_t>(n), 1);
    for (int s : seq) deg[s] += 1;
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    EdgeSet edges;
    for (int s : seq) {
        int leaf = -1;
        for (int j = 0; j < n; ++j)
            if (!done[j] && deg[j] == 1) {
                leaf = j;
                break;
            }
        edges.push_back(norm_edge(leaf, s));
        done[leaf] = 1;
        deg[leaf] -= 1;
        deg[s] -= 1;
    }
    int a = -1, b = -1;
    for (int j = 0; j < n; ++j)
        if (!done[j] && deg[j] == 1) (a < 0 ? a : b) = j;
    edges.push_back(norm_edge(a, b));
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Centers by leaf stripping (one or two vertices).
std::vector<int> tree_centers(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 1) return {0};
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<char> gone(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) deg[v] = static_cast<int>(adj[v].size());
    int remaining = n;
    std::vector<int> layer;
    for (int v = 0; v < n; ++v)
        if (deg[v] <= 1) layer.push_back(v);
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : layer) {
            gone[v] = 1;
            --remaining;
            for (int w : adj[v])
                if (!gone[w] && --deg[w] == 1) next.push_back(w);
        }
        layer = std::move(next);
    }
    std::vector<int> centers;
    for (int v = 0; v < n; ++v)
        if (!gone[v]) centers.push_back(v);
    return centers;
}

std::string ahu_string(const std::vector<std::vector<int>>& adj, int v, int parent) {
    std::vector<std::string> kids;
    for (int w : adj[v])
        if (w != parent) kids.push_back(ahu_string(adj, w, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const std::string& k : kids) s += k;
    s += ")";
    return s;
}

RootedTree relabel_from(const std::vector<std::vector<int>>& adj, int root) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::vector<int> parents(static_cast<std::size_t>(n), -2);
    std::vector<int> queue{root};
    label[root] = 0;
    parents[0] = -1;
    int issued = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int w : adj[v])
            if (label[w] < 0) {
                label[w] = issued++;
                parents[label[w]] = label[v];
                queue.push_back(w);
            }
    }
    return RootedTree::from_parents(n, 0, parents);
}

}  // namespace

std::vector<RootedTree> all_trees_with_edges(int d) {
    if (d < 0) throw PreconditionError("all_trees_with_edges: negative edge count");
    std::vector<RootedTree> out;
    if (d == 0) {
        out.push_back(RootedTree::from_parents(1, 0, {-1}));
        return out;
    }
    const int n = d + 1;
    long long total = 1;
    for (int i = 0; i < n - 2; ++i) total *= n;

    std::set<std::string> seen;
    for (long long code = 0; code < total; ++code) {
        std::vector<int> seq(static_cast<std::size_t>(n - 2));
        long long rest = code;
        for (int i = 0; i < n - 2; ++i) {
            seq[i] = static_cast<int>(rest % n);
            rest /= n;
        }
        const EdgeSet edges = prufer_decode(seq, n);
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (const Edge& e : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        for (auto& row : adj) std::sort(row.begin(), row.end());

        const std::vector<int> centers = tree_centers(adj);
        std::string canon;
        int canon_root = centers[0];
        for (int c : centers) {
            std::string s = ahu_string(adj, c, -1);
            if (canon.empty() || s < canon) {
                canon = s;
                canon_root = c;
            }
        }
        if (seen.insert(canon).second) out.push_back(relabel_from(adj, canon_root));
    }
    return out;
}

ScanReport erdos_sos_scan(int n_max, int d_max) {
    if (n_max < 1 || n_max > 7)
        throw PreconditionError("erdos_sos_scan: n_max must be in [1, 7]; 2^C(n,2) masks "
                                "per order make larger scans infeasible here");
    if (d_max < 1) throw PreconditionError("erdos_sos_scan: d_max must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    ScanReport report;
    report.n_max = n_max;
    report.d_max = d_max;

    std::vector<std::vector<RootedTree>> trees(static_cast<std::size_t>(d_max) + 1);
    for (int d = 1; d <= d_max; ++d) trees[d] = all_trees_with_edges(d);

    for (int n = 1; n <= n_max; ++n) {
        std::vector<Edge> slots;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) slots.push_back({u, v});
        const int c2 = static_cast<int>(slots.size());
        std::vector<int> active;
        EdgeSet edges;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << c2); ++mask) {
            ++report.graphs_checked;
            const int e = __builtin_popcountll(mask);
            // Thresholds this graph clears: only those need the tree checks.
            active.clear();
            for (int d = 1; d <= std::min(d_max, n - 1); ++d)
                if (2LL * e > static_cast<long long>(d - 1) * n) active.push_back(d);
            if (active.empty()) continue;
            edges.clear();
            for (int i = 0; i < c2; ++i)
                if (mask >> i & 1) edges.push_back(slots[i]);
            const Graph g = Graph::make(n, edges);
            for (int d : active)
                for (const RootedTree& t : trees[d])
                    if (!contains_tree(g, t).contains)
                        report.counterexamples.push_back({g, t});
        }
    }
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

Graph generate_extremal(ExtremalKind kind, int n, int d) {
    if (n < 1 || d < 1) throw PreconditionError("generate_extremal: n and d must be positive");
    switch (kind) {
        case ExtremalKind::DisjointCliques: {
            EdgeSet edges;
            const int blocks = n / d;
            for (int b = 0; b < blocks; ++b)
                for (int u = b * d; u < (b + 1) * d; ++u)
                    for (int v = u + 1; v < (b + 1) * d; ++v) edges.push_back({u, v});
            for (int u = blocks * d; u < n; ++u)
                for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
            return Graph::make(n, edges);
        }
        case ExtremalKind::Regular: {
            const int r = d - 1;
            if (r >= n)
                throw PreconditionError("generate_extremal: a (d-1)-regular graph needs d-1 < n");
            if ((static_cast<long long>(r) * n) % 2 != 0)
                throw PreconditionError("generate_extremal: (d-1)n must be even");
            std::set<Edge> edges;
            for (int v = 0; v < n; ++v)
                for (int o = 1; o <= r / 2; ++o) edges.insert(norm_edge(v, (v + o) % n));
            if (r % 2 == 1)
                for (int v = 0; v < n / 2; ++v) edges.insert(norm_edge(v, v + n / 2));
            return Graph::make(n, EdgeSet(edges.begin(), edges.end()));
        }
        case ExtremalKind::DominatingSetJoin: {
            if (d % 2 == 0)
                throw PreconditionError("generate_extremal: the dominating-set join needs odd d");
            const int k = (d - 1) / 2;
            if (k > n) throw PreconditionError("generate_extremal: (d-1)/2 exceeds n");
            EdgeSet edges;
            for (int u = 0; u < k; ++u) {
                for (int v = u + 1; v < k; ++v) edges.push_back({u, v});
                for (int v = k; v < n; ++v) edges.push_back({u, v});
            }
            return Graph::make(n, edges);
        }
    }
    throw PreconditionError("generate_extremal: unknown kind");
}

}  // namespace oracle
}  // namespace treestab
