#include "treestab/cutdense.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

#include "treestab/errors.hpp"
#include "treestab/rng.hpp"

namespace treestab {

namespace {

// Local view of g: vertices renumbered 0..n-1 with bitmask adjacency.
// Only valid for n <= 62 (an extra bit is kept free for shifted masks).
struct MaskView {
    int n = 0;
    std::vector<int> label;                 // local -> ambient
    std::vector<std::uint64_t> adj;         // local adjacency masks

    explicit MaskView(const Graph& g) : n(g.order()), label(g.verts), adj(g.order(), 0) {
        std::vector<int> local(g.ambient_n, -1);
        for (int i = 0; i < n; ++i) local[label[i]] = i;
        for (const auto& [u, v] : g.edges) {
            adj[local[u]] |= std::uint64_t(1) << local[v];
            adj[local[v]] |= std::uint64_t(1) << local[u];
        }
    }

    VertexSet labels_of(std::uint64_t mask) const {
        VertexSet out;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) out.push_back(label[i]);
        return out;
    }
};

long long cross_edges(const MaskView& mv, std::uint64_t amask, std::uint64_t bmask) {
    long long e = 0;
    for (int i = 0; i < mv.n; ++i)
        if (amask >> i & 1) e += std::popcount(mv.adj[i] & bmask);
    return e;
}

}  // namespace

CutCertificate exact_cut_density(const Graph& g, int max_n) {
    const int n = g.order();
    if (n < 2) throw PreconditionError("exact_cut_density: graph has " +
                                       std::to_string(n) + " vertices, need at least 2");
    if (n > max_n || n > 62)
        throw BudgetExceeded("exact_cut_density: order " + std::to_string(n) +
                             " exceeds the enumeration budget (" +
                             std::to_string(std::min(max_n, 62)) + ")");

    MaskView mv(g);
    const std::uint64_t full = (std::uint64_t(1) << n) - 1;

    // Vertex 0 is pinned to side A, so each bipartition appears exactly once.
    long long best_num = -1, best_den = 1;
    std::uint64_t best_mask = 0;
    const std::uint64_t sub_end = std::uint64_t(1) << (n - 1);
    for (std::uint64_t sub = 0; sub + 1 < sub_end; ++sub) {
        const std::uint64_t amask = (sub << 1) | 1;
        const std::uint64_t bmask = full & ~amask;
        const int a = std::popcount(amask);
        const long long prod = static_cast<long long>(a) * (n - a);
        const long long e = cross_edges(mv, amask, bmask);
        if (best_num < 0 || e * best_den < best_num * prod) {
            best_num = e;
            best_den = prod;
            best_mask = amask;
        }
    }

    CutCertificate cert;
    cert.kind = CertKind::Exact;
    cert.q_value = Q(Int(best_num), Int(best_den));
    cert.witness = mv.labels_of(best_mask);
    return cert;
}

Q union_bound(const Q& q, const Graph& g1, const Graph& g2) {
    const VertexSet uni = set_union(g1.verts, g2.verts);
    const VertexSet inter = set_intersect(g1.verts, g2.verts);
    if (uni.empty()) throw PreconditionError("union_bound: both graphs are empty");
    return q * Q(Int(inter.size()), Int(4 * uni.size()));
}

Q attach_bound(const Q& q, const Graph& g, const Graph& h, const Q& delta) {
    if (!g.is_subgraph_of(h))
        throw PreconditionError("attach_bound: g is not a subgraph of h");
    if (g.order() == 0) throw PreconditionError("attach_bound: g is empty");
    const Q quota = delta * Q(Int(g.order()));
    for (int v : h.verts) {
        if (set_contains(g.verts, v)) continue;
        long long inside = 0;
        for (int w : h.neighbors(v))
            if (set_contains(g.verts, w)) ++inside;
        if (Q(Int(inside)) < quota)
            throw PreconditionError("attach_bound: vertex " + std::to_string(v) + " has " +
                                    std::to_string(inside) + " neighbors in g, below delta|g| = " +
                                    to_string(quota));
    }
    const Int ng(g.order()), nh(h.order());
    return q * delta * Q(ng * ng, 4 * nh * nh);
}

Q delete_set_bound(const Q& q, const Graph& g, const VertexSet& u) {
    if (Q(Int(u.size()) * 8) > q * Q(Int(g.order())))
        throw PreconditionError("delete_set_bound: |u| = " + std::to_string(u.size()) +
                                " exceeds q|g|/8 = " + to_string(q * Q(Int(g.order()), Int(8))));
    return q / Q(Int(2));
}

namespace {

// |N(S) \ S| via sorted-set arithmetic; works for any order.
long long boundary_size(const Graph& g, const VertexSet& s) {
    VertexSet nb;
    for (int v : s)
        for (int w : g.neighbors(v))
            if (!set_contains(s, w)) nb.push_back(w);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    return static_cast<long long>(nb.size());
}

bool expansion_violated(const Q& factor, long long boundary, long long size) {
    return Q(Int(boundary)) < factor * Q(Int(size));
}

// Sum_{k=1..max_size} C(n,k), saturating at `cap`.
long long subset_count(int n, int max_size, long long cap) {
    long long total = 0;
    long long binom = 1;  // C(n,0)
    for (int k = 1; k <= max_size && k <= n; ++k) {
        if (binom > (std::numeric_limits<long long>::max() >> 7)) return cap + 1;
        binom = binom * (n - k + 1) / k;
        total += binom;
        if (total > cap) return cap + 1;
    }
    return total;
}

}  // namespace

ExpansionReport expansion_check(const Graph& g, const Q& factor, int max_size,
                                std::uint64_t seed, const Budgets& budgets) {
    ExpansionReport report;
    const int n = g.order();
    if (n == 0 || max_size < 1) return report;
    const int cap = std::min(max_size, n);

    if (n <= 62 && subset_count(n, cap, budgets.search_nodes) <= budgets.search_nodes) {
        MaskView mv(g);
        for (int k = 1; k <= cap; ++k) {
            // Gosper's hack: k-subsets in ascending mask order.
            std::uint64_t mask = (std::uint64_t(1) << k) - 1;
            const std::uint64_t end = std::uint64_t(1) << n;
            while (mask < end) {
                std::uint64_t nb = 0;
                for (int i = 0; i < n; ++i)
                    if (mask >> i & 1) nb |= mv.adj[i];
                nb &= ~mask;
                if (expansion_violated(factor, std::popcount(nb), k)) {
                    report.pass = false;
                    report.witness = mv.labels_of(mask);
                    return report;
                }
                const std::uint64_t c = mask & -mask;
                const std::uint64_t r = mask + c;
                mask = (((r ^ mask) >> 2) / c) | r;
            }
        }
        return report;
    }

    // Sampled mode: random subsets plus greedy adversarial growth from each
    // start (always add the vertex that keeps the boundary smallest).
    report.exhaustive = false;
    Rng rng(seed);
    const long long trials = std::max<long long>(128, budgets.retries * 32LL);
    for (long long t = 0; t < trials; ++t) {
        const std::size_t size = 1 + static_cast<std::size_t>(rng.below(cap));
        VertexSet s = rng.sample_without_replacement(g.verts, size);
        if (expansion_violated(factor, boundary_size(g, s), static_cast<long long>(s.size()))) {
            report.pass = false;
            report.witness = s;
            return report;
        }
    }
    const int starts = std::min(n, 32);
    for (int si = 0; si < starts; ++si) {
        VertexSet s{g.verts[static_cast<std::size_t>(rng.below(n))]};
        std::sort(s.begin(), s.end());
        while (static_cast<int>(s.size()) <= cap) {
            const long long b = boundary_size(g, s);
            if (expansion_violated(factor, b, static_cast<long long>(s.size()))) {
                report.pass = false;
                report.witness = s;
                return report;
            }
            if (static_cast<int>(s.size()) == cap) break;
            // Candidate boundary vertices; pick the one minimizing the new boundary.
            VertexSet nb;
            for (int v : s)
                for (int w : g.neighbors(v))
                    if (!set_contains(s, w)) nb.push_back(w);
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            if (nb.empty()) break;
            long long best_b = std::numeric_limits<long long>::max();
            int best_v = -1;
            for (int w : nb) {
                VertexSet s2 = set_union(s, VertexSet{w});
                const long long b2 = boundary_size(g, s2);
                if (b2 < best_b) {
                    best_b = b2;
                    best_v = w;
                }
            }
            s = set_union(s, VertexSet{best_v});
        }
    }
    return report;
}

PreservationTrial sample_preservation_trial(const Graph& g, const Q& q, const Q& p,
                                            std::uint64_t seed, const Budgets& budgets) {
    PreservationTrial trial;
    Rng rng(seed);
    for (int v : g.verts)
        if (rng.chance(p)) trial.sample.push_back(v);

    trial.supersets_checked = std::max(1, budgets.retries);
    const Q half(Int(1), Int(2));
    bool first = true;
    for (int i = 0; i < trial.supersets_checked; ++i) {
        VertexSet t = trial.sample;
        for (int v : g.verts)
            if (!set_contains(trial.sample, v) && rng.chance(half)) t.push_back(v);
        std::sort(t.begin(), t.end());

        Q density(1);  // graphs of order < 2 are vacuously cut-dense
        if (t.size() >= 2) {
            const Graph sub = g.induced(t);
            if (static_cast<int>(t.size()) <= budgets.exact_cut_max_n)
                density = exact_cut_density(sub, budgets.exact_cut_max_n).q_value;
            else
                density = flow_certify(sub).certificate.q_value;
        }
        if (first || density < trial.empirical_min) {
            trial.empirical_min = density;
            first = false;
        }
    }

    // Sound (if slightly generous downward) exponent: ceil(q^-4).
    const Q q_inv = Q(q.denominator(), q.numerator());
    const Q e4 = pow_q(q_inv, 4);
    Int e_int = ceil_q(e4);
    const Int e_cap = Int(1) << 62;
    unsigned long long e = e_int > e_cap ? (std::uint64_t(1) << 62)
                                         : e_int.convert_to<unsigned long long>();
    const Q floor_q_val(Int(1), Int(1) << 40);
    GuaranteeBound b = clamped_pow(p, e, floor_q_val, "p^(q^-4)");
    GuaranteeBound q5{pow_q(q, 5), false, false, "q^5"};
    GuaranteeBound prod = combine_bounds(b, q5, floor_q_val);
    trial.analytic_bound = prod.value;
    trial.bound_below_floor = prod.below_floor;
    return trial;
}

}  // namespace treestab
