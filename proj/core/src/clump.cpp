#include <algorithm>
#include <iterator>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treestab/clump.hpp"
#include "treestab/errors.hpp"

namespace treestab {

namespace {

const Q kBoundFloor(Int(1), Int(1) << 40);

CutCertificate certify_density(const Graph& g, const Budgets& budgets) {
    if (g.order() <= budgets.exact_cut_max_n) return exact_cut_density(g, budgets.exact_cut_max_n);
    return flow_certify(g).certificate;
}

// 6 * (10 max_k)! with the same saturation cap as the factorial itself.
unsigned long long six_factorial_exponent(int max_k) {
    const unsigned long long cap = 1ULL << 62;
    const unsigned long long f = saturating_factorial(10ULL * static_cast<unsigned long long>(max_k));
    return (f > cap / 6) ? cap : 6 * f;
}

}  // namespace

int clump_regular_degree(const ParamHierarchy& params) {
    const long long f = floor_ll(pow_q(params.p, 13) * Q(Int(params.m)));
    return static_cast<int>(std::max<long long>(1, f));
}

GuaranteeBound core_density_bound(const ParamHierarchy& params, int k) {
    const unsigned long long e = saturating_factorial(10ULL * static_cast<unsigned long long>(k));
    return clamped_pow(params.kappa, e, kBoundFloor,
                       "kappa^((10k)!), k = " + std::to_string(k));
}

long long join_overlap_threshold(const ParamHierarchy& params, int max_k) {
    const GuaranteeBound b = clamped_pow(params.kappa, six_factorial_exponent(max_k), kBoundFloor,
                                         "kappa^(6(10k)!)");
    return std::max<long long>(1, floor_ll(b.value * Q(Int(params.m))));
}

Clump init_clump(const Graph& h, const ParamHierarchy& params,
                 const CutCertificate* precomputed) {
    if (params.m <= 0) throw PreconditionError("init_clump: params not finalized (m = 0)");
    if (h.order() != params.m)
        throw PreconditionError("init_clump: host order " + std::to_string(h.order()) +
                                " != m = " + std::to_string(params.m));
    CutCertificate cert = precomputed ? *precomputed : certify_density(h, params.budgets);
    if (cert.kind == CertKind::ViolatingCut || cert.q_value < params.p)
        throw PreconditionError("init_clump: host density " + to_string(cert.q_value) +
                                " below p = " + to_string(params.p));

    Clump k;
    k.graph = h;
    k.h_family = {h};
    const int r = clump_regular_degree(params);
    k.m_family = max_disjoint_regular_family(k.h_family, r, params.budgets.search_nodes);
    k.k = static_cast<int>(k.m_family.members.size());
    if (k.k == 0)
        throw ValidationError("init_clump: no " + std::to_string(r) +
                              "-regular subgraph in a p-cut-dense host of order " +
                              std::to_string(h.order()));
    if (static_cast<long long>(k.k) * r > params.m)
        throw ValidationError("init_clump: family size " + std::to_string(k.k) +
                              " exceeds m/r");
    k.flags.regular_budget_limited = (k.m_family.maximal_flag == MaximalFlag::MaximalUnderBudget);

    k.c_core = h;
    GuaranteeBound claim = core_density_bound(params, k.k);
    k.flags.core_bound_below_floor = claim.below_floor;
    if (cert.q_value < claim.value) {
        // The formula bound exceeds what the certificate vouches; keep the
        // measured value and flag the downgrade.
        k.flags.core_cert_heuristic = true;
        claim = GuaranteeBound{cert.q_value, false, false, "host certificate lower bound"};
    }
    k.core_bound = claim;
    return k;
}

DerivedSets derive_sets(const Clump& k, const Graph& ambient,
                        const ParamHierarchy& params) {
    if (!k.graph.is_subgraph_of(ambient))
        throw PreconditionError("derive_sets: clump graph is not inside the ambient graph");
    DerivedSets out;
    out.m_union = k.m_vertices();

    EdgeSet b_edges;
    for (const Graph& mem : k.m_family.members)
        b_edges.insert(b_edges.end(), mem.edges.begin(), mem.edges.end());
    const Q thresh = params.p * Q(Int(params.m)) / Q(2);
    for (int v : k.graph.verts) {
        if (set_contains(out.m_union, v)) continue;
        const VertexSet hits = set_intersect(k.graph.neighbors(v), out.m_union);
        if (Q(Int(hits.size())) >= thresh)
            for (int u : hits) b_edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(b_edges.begin(), b_edges.end());
    b_edges.erase(std::unique(b_edges.begin(), b_edges.end()), b_edges.end());
    VertexSet b_verts;
    for (const Edge& e : b_edges) {
        b_verts.push_back(e.first);
        b_verts.push_back(e.second);
    }
    std::sort(b_verts.begin(), b_verts.end());
    b_verts.erase(std::unique(b_verts.begin(), b_verts.end()), b_verts.end());
    out.b_graph = Graph::make_on(k.graph.ambient_n, b_verts, b_edges);
    out.d_graph = k.c_core.union_with(out.b_graph);

    for (const Edge& e : out.b_graph.edges)
        if (!set_contains(out.m_union, e.first) && !set_contains(out.m_union, e.second))
            throw ValidationError("derive_sets: a B-edge misses V(M)");
    // Edge-count consequence of the regular family, checked whenever the
    // implemented degree sits at or above the exact p^13 m value.
    const Q r_exact = pow_q(params.p, 13) * Q(Int(params.m));
    if (Q(Int(clump_regular_degree(params))) >= r_exact) {
        const Q rhs = r_exact * Q(Int(out.b_graph.order())) / Q(10);
        if (Q(Int(k.graph.edge_count())) < rhs)
            throw ValidationError("derive_sets: e(K) < p^13 m |B| / 10");
    }
    return out;
}

Clump join_clumps(const Clump& k1, const Clump& k2, const ParamHierarchy& params,
                  const Graph& ambient) {
    {
        EdgeSet shared;
        std::set_intersection(k1.graph.edges.begin(), k1.graph.edges.end(),
                              k2.graph.edges.begin(), k2.graph.edges.end(),
                              std::back_inserter(shared));
        if (!shared.empty())
            throw PreconditionError("join_clumps: clumps share " +
                                    std::to_string(shared.size()) + " edge(s)");
    }
    const long long k_cap = floor_ll(Q(1) / params.kappa);
    if (k1.k > k_cap || k2.k > k_cap)
        throw PreconditionError("join_clumps: a member count exceeds kappa^-1 = " +
                                std::to_string(k_cap));
    const DerivedSets d1 = derive_sets(k1, ambient, params);
    const DerivedSets d2 = derive_sets(k2, ambient, params);
    const VertexSet overlap = set_intersect(d1.d_graph.verts, d2.d_graph.verts);
    const long long need = join_overlap_threshold(params, std::max(k1.k, k2.k));
    if (static_cast<long long>(overlap.size()) < need)
        throw PreconditionError("join_clumps: |D1 n D2| = " + std::to_string(overlap.size()) +
                                " below the threshold " + std::to_string(need));

    Clump out;
    out.graph = k1.graph.union_with(k2.graph);
    out.h_family = k1.h_family;
    out.h_family.insert(out.h_family.end(), k2.h_family.begin(), k2.h_family.end());
    out.flags.regular_budget_limited =
        k1.flags.regular_budget_limited || k2.flags.regular_budget_limited;

    // Seed the family from the larger clump, then augment on all hosts minus
    // the seeded vertices. The lemma's upper bound k1+k2 acts as a stop.
    const bool seed_is_k2 = k2.k > k1.k;
    const Clump& big = seed_is_k2 ? k2 : k1;
    const int host_offset = seed_is_k2 ? static_cast<int>(k1.h_family.size()) : 0;
    RegularFamily fam;
    fam.r = clump_regular_degree(params);
    fam.maximal_flag = big.m_family.maximal_flag;
    for (std::size_t i = 0; i < big.m_family.members.size(); ++i) {
        fam.members.push_back(big.m_family.members[i]);
        fam.host_index.push_back(big.m_family.host_index[i] + host_offset);
    }
    const VertexSet seeded = fam.vertices();
    std::vector<Graph> residual_hosts;
    residual_hosts.reserve(out.h_family.size());
    for (const Graph& host : out.h_family)
        residual_hosts.push_back(host.without_vertices(seeded));
    RegularFamily extra =
        max_disjoint_regular_family(residual_hosts, fam.r, params.budgets.search_nodes);
    if (extra.maximal_flag == MaximalFlag::MaximalUnderBudget)
        fam.maximal_flag = MaximalFlag::MaximalUnderBudget;
    const long long member_cap = static_cast<long long>(k1.k) + k2.k;
    for (std::size_t i = 0; i < extra.members.size(); ++i) {
        if (fam.size() >= member_cap) {
            fam.maximal_flag = MaximalFlag::MaximalUnderBudget;  // capped, not proven
            break;
        }
        fam.members.push_back(extra.members[i]);
        fam.host_index.push_back(extra.host_index[i]);
    }
    out.flags.regular_budget_limited |= (fam.maximal_flag == MaximalFlag::MaximalUnderBudget);

    const int new_k = static_cast<int>(fam.members.size());
    if (new_k > big.k) {
        // Growth: rebuild the core as C1 u C2 u (all hosts) and certify.
        out.m_family = std::move(fam);
        out.k = new_k;
        Graph core = k1.c_core.union_with(k2.c_core);
        for (const Graph& host : out.h_family) core = core.union_with(host);
        out.c_core = core;
        GuaranteeBound claim = core_density_bound(params, out.k);
        out.flags.core_bound_below_floor = claim.below_floor;
        const CutCertificate cert = certify_density(core, params.budgets);
        if (cert.q_value < claim.value) {
            out.flags.core_cert_heuristic = true;
            claim = GuaranteeBound{cert.q_value, false, false,
                                   cert.kind == CertKind::Exact
                                       ? "exact core density (below the formula claim)"
                                       : "flow lower bound (formula claim unverified)"};
        }
        out.core_bound = claim;
    } else {
        // No growth: the larger clump's family and core carry over.
        out.m_family = std::move(fam);
        out.k = big.k;
        out.c_core = big.c_core;
        out.core_bound = big.core_bound;
        out.flags.core_bound_below_floor =
            k1.flags.core_bound_below_floor || k2.flags.core_bound_below_floor;
        out.flags.core_cert_heuristic =
            k1.flags.core_cert_heuristic || k2.flags.core_cert_heuristic;
    }
    if (out.k < std::max(k1.k, k2.k) || out.k > member_cap)
        throw ValidationError("join_clumps: k sandwich max(k1,k2) <= k <= k1+k2 violated");
    return out;
}

ClumpUnionResult clump_cut_dense_subgraph(const std::vector<Clump>& clumps,
                                          const std::vector<VertexSet>& i_sets,
                                          const std::vector<std::optional<Graph>>& h_choices,
                                          const ParamHierarchy& params) {
    if (clumps.empty()) throw PreconditionError("clump_cut_dense_subgraph: no clumps");
    const std::size_t t_count = clumps.size();
    if (i_sets.size() != t_count || h_choices.size() != t_count)
        throw PreconditionError(
            "clump_cut_dense_subgraph: need one i_set and one h_choice per clump");
    const long long want = std::max<long long>(1, ceil_ll(params.mu * Q(Int(params.m))));
    const DerivedSets d0 = derive_sets(clumps[0], clumps[0].graph, params);

    Graph u = clumps[0].c_core;
    for (std::size_t i = 0; i < t_count; ++i) {
        const Clump& ki = clumps[i];
        const DerivedSets di = (i == 0) ? d0 : derive_sets(ki, ki.graph, params);
        const VertexSet& I = i_sets[i];
        const bool trivial = (t_count == 1 && I.empty());
        if (!trivial) {
            if (static_cast<long long>(I.size()) != want)
                throw PreconditionError("clump_cut_dense_subgraph: i_sets[" + std::to_string(i) +
                                        "] has " + std::to_string(I.size()) +
                                        " vertices; mu*m rounds to " + std::to_string(want));
            const VertexSet inter = set_intersect(d0.d_graph.verts, di.d_graph.verts);
            if (!set_minus(I, inter).empty())
                throw PreconditionError("clump_cut_dense_subgraph: i_sets[" + std::to_string(i) +
                                        "] leaves D(K_1) n D(K_" + std::to_string(i + 1) + ")");
        }
        u = u.union_with(ki.c_core);
        if (!I.empty()) u = u.union_with(Graph::make_on(ki.graph.ambient_n, I, {}));
        if (h_choices[i]) {
            const Graph& hc = *h_choices[i];
            bool member = false;
            for (const Graph& host : ki.h_family)
                if (host.verts == hc.verts && host.edges == hc.edges) {
                    member = true;
                    break;
                }
            if (!member)
                throw PreconditionError("clump_cut_dense_subgraph: h_choices[" +
                                        std::to_string(i) + "] is not a member of H(K_" +
                                        std::to_string(i + 1) + ")");
            u = u.union_with(hc);
        }
    }

    int k_max = 0;
    for (const Clump& ki : clumps) k_max = std::max(k_max, ki.k);
    const unsigned long long mu_exp =
        2ULL * static_cast<unsigned long long>(k_max) * t_count * t_count;
    const GuaranteeBound a = core_density_bound(params, k_max);
    const GuaranteeBound b =
        clamped_pow(params.mu, mu_exp, kBoundFloor,
                    "mu^(2kt^2), k = " + std::to_string(k_max) + ", t = " +
                        std::to_string(t_count));
    ClumpUnionResult res;
    res.graph = std::move(u);
    res.guaranteed_q = combine_bounds(a, b, kBoundFloor);
    // When the union is small enough to enumerate, measure the true density
    // and never claim more than it; the measured value replaces the formula
    // claim instead of silently coexisting with it.
    if (res.graph.order() >= 2 && res.graph.order() <= params.budgets.exact_cut_max_n) {
        const CutCertificate exact =
            exact_cut_density(res.graph, params.budgets.exact_cut_max_n);
        if (exact.q_value < res.guaranteed_q.value) {
            res.guaranteed_q.value = exact.q_value;
            res.guaranteed_q.below_floor = false;
            res.guaranteed_q.dyadic_rounded = false;
            res.guaranteed_q.formula += " [downgraded to the measured exact density]";
        }
    }
    return res;
}

StagedEmbedResult clump_embed_trigger(const std::vector<Clump>& clumps,
                                      ClumpTrigger trigger, const TriggerPayload& payload,
                                      const RootedTree& t, const ParamHierarchy& params) {
    auto check_index = [&clumps](int i, const char* what) {
        if (i < 0 || i >= static_cast<int>(clumps.size()))
            throw PreconditionError(std::string("clump_embed_trigger: bad ") + what +
                                    " index " + std::to_string(i));
    };

    if (trigger == ClumpTrigger::LargeM) {
        check_index(payload.center, "center");
        const Clump& k = clumps[payload.center];
        const VertexSet mv = k.m_vertices();
        const Q need = (Q(2) + params.epsilon) * Q(Int(t.order()));
        if (Q(Int(mv.size())) < need)
            throw PreconditionError("clump_embed_trigger: |V(M)| = " +
                                    std::to_string(mv.size()) + " below (2+eps)|t| = " +
                                    to_string(need));
        Graph r_sub = Graph::make_on(k.graph.ambient_n, {}, {});
        for (const Graph& mem : k.m_family.members) r_sub = r_sub.union_with(mem);
        ParamHierarchy half = params;
        half.epsilon = params.epsilon / 2;  // (2+2*(eps/2)) |t| = (2+eps)|t|
        return embed_cut_dense(k.c_core, r_sub, t, half, params.seed);
    }

    if (trigger == ClumpTrigger::ManyOverlaps) {
        check_index(payload.center, "center");
        std::vector<Clump> sel;
        sel.push_back(clumps[payload.center]);
        for (int j : payload.members) {
            if (j == payload.center) continue;
            check_index(j, "member");
            sel.push_back(clumps[j]);
        }
        if (payload.i_sets.size() != sel.size())
            throw PreconditionError("clump_embed_trigger: i_sets count " +
                                    std::to_string(payload.i_sets.size()) +
                                    " != selected clump count " + std::to_string(sel.size()));
        const std::vector<std::optional<Graph>> none(sel.size(), std::nullopt);
        const ClumpUnionResult uni =
            clump_cut_dense_subgraph(sel, payload.i_sets, none, params);
        // Merge the regular families across clumps, keeping members that stay
        // vertex-disjoint from everything already taken.
        Graph r_sub = Graph::make_on(uni.graph.ambient_n, {}, {});
        VertexSet taken;
        for (const Clump& ki : sel)
            for (const Graph& mem : ki.m_family.members)
                if (set_intersect(mem.verts, taken).empty()) {
                    r_sub = r_sub.union_with(mem);
                    taken = set_union(taken, mem.verts);
                }
        return embed_cut_dense(uni.graph, r_sub, t, params, params.seed);
    }

    // SubdivisionTree: trim the D-graphs of the selected clumps so adjacent
    // pieces share exactly their designated connector, then hand the chain to
    // the pieces embedder.
    const std::vector<int>& mem = payload.members;
    const int np = static_cast<int>(mem.size());
    if (np == 0) throw PreconditionError("clump_embed_trigger: no subdivision members");
    if (payload.s_tree.order() != np)
        throw PreconditionError("clump_embed_trigger: s_tree order " +
                                std::to_string(payload.s_tree.order()) +
                                " != member count " + std::to_string(np));
    for (int j : mem) check_index(j, "member");
    {
        std::vector<int> conn_values;
        for (const auto& kv : payload.connectors) conn_values.push_back(kv.second);
        std::sort(conn_values.begin(), conn_values.end());
        if (std::adjacent_find(conn_values.begin(), conn_values.end()) != conn_values.end())
            throw PreconditionError(
                "clump_embed_trigger: two s_tree edges share a connector vertex");
    }

    std::vector<Graph> cores;
    cores.reserve(static_cast<std::size_t>(np));
    for (int j : mem)
        cores.push_back(derive_sets(clumps[j], clumps[j].graph, params).d_graph);

    std::vector<VertexSet> allowed(static_cast<std::size_t>(np));
    for (int c : payload.s_tree.verts) {
        if (c == payload.s_tree.root) continue;
        const int p = payload.s_tree.parent[c];
        auto it = payload.connectors.find({p, c});
        if (it == payload.connectors.end())
            throw PreconditionError("clump_embed_trigger: missing connector for s_tree edge (" +
                                    std::to_string(p) + "," + std::to_string(c) + ")");
        const int w = it->second;
        if (!cores[p].has_vertex(w) || !cores[c].has_vertex(w))
            throw PreconditionError("clump_embed_trigger: connector " + std::to_string(w) +
                                    " is outside D(K) of piece " + std::to_string(p) + " or " +
                                    std::to_string(c));
        allowed[p].push_back(w);
        allowed[c].push_back(w);
    }
    std::vector<Graph> pieces;
    pieces.reserve(static_cast<std::size_t>(np));
    for (int j = 0; j < np; ++j) {
        std::sort(allowed[j].begin(), allowed[j].end());
        VertexSet shared;
        for (int l = 0; l < np; ++l)
            if (l != j) shared = set_union(shared, set_intersect(cores[j].verts, cores[l].verts));
        const VertexSet drop = set_minus(shared, allowed[j]);
        Graph piece = cores[j].without_vertices(drop);
        if (piece.order() == 0)
            throw PreconditionError("clump_embed_trigger: piece " + std::to_string(j) +
                                    " is empty after trimming");
        pieces.push_back(std::move(piece));
    }
    return embed_tree_of_pieces(pieces, payload.s_tree, payload.connectors, t, params);
}

}  // namespace treestab
