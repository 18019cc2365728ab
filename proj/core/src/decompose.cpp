#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"
#include "treestab/rng.hpp"

namespace treestab {

namespace {

// Kernighan-Lin-style local search used beyond the exact enumeration budget:
// random bipartition, then best-improving single-vertex moves on the exact
// objective e(A,B)*q_den - q_num*|A||B| until a violating cut appears or the
// climb stalls. Restarted budgets.retries times.
std::optional<VertexSet> local_search_cut(const Graph& g, const Q& q, std::uint64_t seed,
                                          int restarts) {
    const int n = g.order();
    const Int q_num = q.numerator(), q_den = q.denominator();
    Rng rng(seed);

    for (int attempt = 0; attempt < restarts; ++attempt) {
        // side[v] == true -> A. Keep both sides nonempty throughout.
        std::vector<char> side(g.ambient_n, 0);
        int size_a = 0;
        for (int v : g.verts) {
            side[v] = rng.chance(Q(1, 2)) ? 1 : 0;
            size_a += side[v];
        }
        if (size_a == 0) {
            side[g.verts.front()] = 1;
            size_a = 1;
        } else if (size_a == n) {
            side[g.verts.front()] = 0;
            size_a = n - 1;
        }

        long long cross = 0;
        for (const auto& [u, v] : g.edges) cross += side[u] != side[v];

        auto objective = [&](long long e, long long a) {
            return Int(e) * q_den - q_num * a * (n - a);
        };

        Int best = objective(cross, size_a);
        bool improved = true;
        while (improved && best >= 0) {
            improved = false;
            int best_v = -1;
            long long best_cross = 0;
            Int best_obj = best;
            for (int v : g.verts) {
                const int a_after = size_a + (side[v] ? -1 : 1);
                if (a_after == 0 || a_after == n) continue;
                long long same = 0, other = 0;
                for (int w : g.neighbors(v)) (side[w] == side[v] ? same : other) += 1;
                const long long cross_after = cross + same - other;
                const Int obj = objective(cross_after, a_after);
                if (obj < best_obj) {
                    best_obj = obj;
                    best_v = v;
                    best_cross = cross_after;
                }
            }
            if (best_v >= 0) {
                side[best_v] ^= 1;
                size_a += side[best_v] ? 1 : -1;
                cross = best_cross;
                best = best_obj;
                improved = true;
            }
        }
        if (best < 0) {
            VertexSet a;
            for (int v : g.verts)
                if (side[v]) a.push_back(v);
            return a;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<VertexSet> find_violating_cut(const Graph& g, const Q& q, std::uint64_t seed,
                                            const Budgets& budgets) {
    if (g.order() < 2) return std::nullopt;
    if (g.order() <= budgets.exact_cut_max_n && g.order() <= 62) {
        const CutCertificate cert = exact_cut_density(g, budgets.exact_cut_max_n);
        if (cert.q_value < q) return cert.witness;
        return std::nullopt;
    }
    return local_search_cut(g, q, seed, std::max(1, budgets.retries));
}

DecomposeResult decompose(const Graph& g, const Q& q, std::uint64_t seed,
                          const Budgets& budgets) {
    DecomposeResult result;
    std::deque<Graph> pending;
    for (Graph& c : g.components()) pending.push_back(std::move(c));

    std::uint64_t stream = 0;
    Rng rng(seed);
    while (!pending.empty()) {
        Graph piece = std::move(pending.front());
        pending.pop_front();
        if (piece.order() < 2) {
            result.components.push_back(std::move(piece));
            continue;
        }
        const auto cut = find_violating_cut(piece, q, rng.split(stream++).state, budgets);
        if (!cut) {
            if (piece.order() > budgets.exact_cut_max_n || piece.order() > 62)
                result.heuristic_complete_all = false;
            result.components.push_back(std::move(piece));
            continue;
        }
        // Delete every edge across the violating bipartition and re-split.
        EdgeSet across;
        for (const auto& [u, v] : piece.edges)
            if (set_contains(*cut, u) != set_contains(*cut, v)) across.emplace_back(u, v);
        for (const Edge& e : across) result.deleted.push_back(e);
        Graph rest = piece.without_edges(across);
        for (Graph& c : rest.components()) pending.push_back(std::move(c));
    }

    std::sort(result.deleted.begin(), result.deleted.end());
    std::sort(result.components.begin(), result.components.end(),
              [](const Graph& a, const Graph& b) {
                  const int ma = a.verts.empty() ? -1 : a.verts.front();
                  const int mb = b.verts.empty() ? -1 : b.verts.front();
                  return ma < mb;
              });
    return result;
}

CoreSearchResult find_cut_dense_subgraph(const Graph& g, const Q& p, const Q& q, const Q& mu,
                                         std::uint64_t seed, int retries,
                                         const Budgets& budgets) {
    CoreSearchResult result;
    const int n = g.order();
    if (Q(g.edge_count()) < p * Q(Int(n) * Int(n)))
        throw PreconditionError("find_cut_dense_subgraph: e(g) = " +
                                std::to_string(g.edge_count()) + " is below p|g|^2 = " +
                                to_string(p * Q(Int(n) * Int(n))));

    const long long target = ceil_ll(mu * Q(Int(n)));
    if (target < 1 || target > n) {
        result.diagnostics.push_back("target core order " + std::to_string(target) +
                                     " is out of range for |g| = " + std::to_string(n));
        return result;
    }

    // Sampling scale: midway between the ambient density p and the goal q.
    Q s = (p + q) / Q(Int(2));
    if (s > Q(1)) s = Q(1);
    const Q rate1 = std::min(Q(1), Q(Int(2)) * mu / s);

    Rng rng(seed);
    for (int attempt = 0; attempt < std::max(1, retries); ++attempt) {
        Rng r = rng.split(static_cast<std::uint64_t>(attempt));
        VertexSet sample;
        for (int v : g.verts)
            if (r.chance(rate1)) sample.push_back(v);
        if (static_cast<long long>(sample.size()) < target) {
            result.diagnostics.push_back("retry " + std::to_string(attempt) +
                                         ": sample too small (" +
                                         std::to_string(sample.size()) + ")");
            continue;
        }

        const Graph sampled = g.induced(sample);
        DecomposeResult dec = decompose(sampled, s, r.state, budgets);
        const Graph* largest = nullptr;
        for (const Graph& c : dec.components)
            if (!largest || c.order() > largest->order()) largest = &c;
        if (!largest || largest->order() == 0) {
            result.diagnostics.push_back("retry " + std::to_string(attempt) +
                                         ": decomposition left no component");
            continue;
        }

        // Random core inside the surviving component, padded deterministically
        // to the target order (component first, then the rest of g).
        const Q rate2 = std::min(Q(1), mu * Q(Int(n)) / Q(Int(2) * largest->order()));
        VertexSet core;
        for (int v : largest->verts)
            if (r.chance(rate2)) core.push_back(v);
        for (int v : largest->verts) {
            if (static_cast<long long>(core.size()) >= target) break;
            if (!set_contains(core, v)) {
                core.push_back(v);
                std::sort(core.begin(), core.end());
            }
        }
        for (int v : g.verts) {
            if (static_cast<long long>(core.size()) >= target) break;
            if (!set_contains(core, v)) {
                core.push_back(v);
                std::sort(core.begin(), core.end());
            }
        }
        while (static_cast<long long>(core.size()) > target) core.pop_back();
        std::sort(core.begin(), core.end());

        Graph candidate = g.induced(core);
        CutCertificate cert;
        if (candidate.order() <= budgets.exact_cut_max_n && candidate.order() <= 62 &&
            candidate.order() >= 2) {
            cert = exact_cut_density(candidate, budgets.exact_cut_max_n);
        } else if (candidate.order() >= 2) {
            cert = flow_certify(candidate).certificate;
        } else {
            cert.q_value = Q(1);  // single vertex: vacuously dense
        }
        if (cert.q_value >= q) {
            result.core = std::move(candidate);
            result.certificate = cert;
            return result;
        }
        result.diagnostics.push_back("retry " + std::to_string(attempt) +
                                     ": candidate certified only " + to_string(cert.q_value) +
                                     " < " + to_string(q));
    }
    return result;
}

}  // namespace treestab
