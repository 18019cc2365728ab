#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"

namespace treestab {

namespace {

// Textbook Dinic. Capacities are small integers (path counts), so the
// unit-capacity bound O(E sqrt(E)) applies in practice.
struct Dinic {
    struct Arc {
        int to;
        long long cap;
    };
    std::vector<Arc> arcs;                 // arc 2i+1 is the reverse of 2i
    std::vector<std::vector<int>> out;     // node -> arc indices
    std::vector<int> level, it;

    explicit Dinic(int nodes) : out(nodes) {}

    void add(int u, int v, long long cap) {
        out[u].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({v, cap});
        out[v].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({u, 0});
    }

    bool bfs(int s, int t) {
        level.assign(out.size(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int id : out[u]) {
                const Arc& a = arcs[id];
                if (a.cap > 0 && level[a.to] < 0) {
                    level[a.to] = level[u] + 1;
                    q.push(a.to);
                }
            }
        }
        return level[t] >= 0;
    }

    long long dfs(int u, int t, long long pushed) {
        if (u == t) return pushed;
        for (int& i = it[u]; i < static_cast<int>(out[u].size()); ++i) {
            const int id = out[u][i];
            Arc& a = arcs[id];
            if (a.cap > 0 && level[a.to] == level[u] + 1) {
                const long long got = dfs(a.to, t, std::min(pushed, a.cap));
                if (got > 0) {
                    a.cap -= got;
                    arcs[id ^ 1].cap += got;
                    return got;
                }
            }
        }
        return 0;
    }

    long long max_flow(int s, int t) {
        long long flow = 0;
        while (bfs(s, t)) {
            it.assign(out.size(), 0);
            while (long long got = dfs(s, t, std::numeric_limits<long long>::max()))
                flow += got;
        }
        return flow;
    }
};

// Flow network for edge-disjoint N(u) -> N(v) paths. Every graph vertex x is
// split into x_in -> x_out (unbounded), and every undirected edge becomes a
// capacity-1 gadget w1 -> w2 usable in one direction per unit of flow:
//   x_out -> w1, y_out -> w1, w1 -> w2 (cap 1), w2 -> x_in, w2 -> y_in.
// Sources feed x_out directly and sinks drain from x_in, so a unit that
// starts and ends at the same vertex without using an edge is impossible.
// A unit may still bounce off a single incident edge (x_out -> w1 -> w2 ->
// x_in) when x is both a source and a sink; such an out-and-back consumes
// the edge like any traversal and is accepted as a length-1 walk.
struct PathNetwork {
    const Graph& g;
    int n;
    std::vector<int> local;  // ambient -> local index
    int s, t;
    static constexpr long long kInf = 1LL << 40;

    explicit PathNetwork(const Graph& graph)
        : g(graph), n(graph.order()), local(graph.ambient_n, -1) {
        for (int i = 0; i < n; ++i) local[g.verts[i]] = i;
        const int m = static_cast<int>(g.edges.size());
        s = 2 * n + 2 * m;
        t = s + 1;
    }

    long long count(const VertexSet& sources, const VertexSet& sinks) const {
        const int m = static_cast<int>(g.edges.size());
        Dinic net(2 * n + 2 * m + 2);
        for (int i = 0; i < n; ++i) net.add(2 * i, 2 * i + 1, kInf);  // x_in -> x_out
        for (int k = 0; k < m; ++k) {
            const int x = local[g.edges[k].first], y = local[g.edges[k].second];
            const int w1 = 2 * n + 2 * k, w2 = w1 + 1;
            net.add(2 * x + 1, w1, 1);
            net.add(2 * y + 1, w1, 1);
            net.add(w1, w2, 1);
            net.add(w2, 2 * x, 1);
            net.add(w2, 2 * y, 1);
        }
        for (int v : sources) net.add(s, 2 * local[v] + 1, kInf);
        for (int v : sinks) net.add(2 * local[v], t, kInf);
        return net.max_flow(s, t);
    }
};

}  // namespace

long long edge_disjoint_path_count(const Graph& g, const VertexSet& sources,
                                   const VertexSet& sinks) {
    for (int v : sources)
        if (!g.has_vertex(v))
            throw PreconditionError("edge_disjoint_path_count: source " + std::to_string(v) +
                                    " is not a vertex of g");
    for (int v : sinks)
        if (!g.has_vertex(v))
            throw PreconditionError("edge_disjoint_path_count: sink " + std::to_string(v) +
                                    " is not a vertex of g");
    if (sources.empty() || sinks.empty()) return 0;
    return PathNetwork(g).count(sources, sinks);
}

FlowCertifyResult flow_certify(const Graph& g) {
    const int n = g.order();
    FlowCertifyResult result;
    result.profile.n = n;
    result.profile.table.assign(static_cast<std::size_t>(n) * n, -1);

    PathNetwork net(g);
    auto neighborhood = [&](int v) {
        return VertexSet(g.neighbors(v).begin(), g.neighbors(v).end());
    };

    long long min_pairs = -1, min_diag = -1;
    for (int i = 0; i < n; ++i) {
        const VertexSet nu = neighborhood(g.verts[i]);
        // The network is symmetric in (u, v): compute unordered pairs once.
        for (int j = i; j < n; ++j) {
            const long long c = (nu.empty() || g.neighbors(g.verts[j]).empty())
                                    ? 0
                                    : net.count(nu, neighborhood(g.verts[j]));
            result.profile.table[static_cast<std::size_t>(i) * n + j] = c;
            result.profile.table[static_cast<std::size_t>(j) * n + i] = c;
            if (i == j) {
                if (min_diag < 0 || c < min_diag) min_diag = c;
            } else {
                if (min_pairs < 0 || c < min_pairs) min_pairs = c;
            }
        }
    }
    result.profile.min_pairs = std::max<long long>(min_pairs, 0);
    result.profile.min_pairs_diagonal = std::max<long long>(min_diag, 0);

    result.certificate.kind = CertKind::FlowLowerBound;
    result.certificate.q_value =
        n > 0 ? Q(Int(result.profile.min_pairs), Int(10) * n * n) : Q(0);
    result.certificate.flagged_small_n = n < 10;
    return result;
}

}  // namespace treestab
