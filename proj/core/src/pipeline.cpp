#include "treestab/pipeline.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"
#include "treestab/oracle.hpp"
#include "treestab/subdivision.hpp"

namespace treestab {

namespace {

std::string count_str(const std::string& key, long long v) {
    return key + "=" + std::to_string(v);
}

EdgeSet edge_difference(const EdgeSet& a, const EdgeSet& b) {
    EdgeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet lowest_k(const VertexSet& s, long long k) {
    VertexSet out(s.begin(), s.begin() + std::min<std::size_t>(s.size(), k));
    return out;
}

}  // namespace

StructureResult hyperstability(const Graph& g, const RootedTree& t, ParamHierarchy params) {
    params.finalize(t.order());
    const long long d = params.d;
    const long long n = g.order();

    StructureResult res;
    std::vector<std::string> caveats;
    std::vector<std::string> hypothesis_warnings;
    auto log_stage = [&res](std::string stage, std::string action, std::string counts,
                            std::string cav) {
        res.stage_log.push_back(
            {std::move(stage), std::move(action), std::move(counts), std::move(cav)});
    };
    // Normalizes an embedding found in a subgraph to the full host and insists
    // it verifies; a failure here is an internal inconsistency, not a search
    // miss.
    auto accept_embedding = [&res, &g, &t](Embedding emb) -> StructureResult {
        emb.host = g;
        emb.tree = t;
        std::string why;
        if (!validate_embedding(emb, std::nullopt, &why))
            throw ValidationError("hyperstability: embedding exit failed validation: " + why);
        res.outcome = Outcome::EmbeddingFound;
        res.embedding = std::move(emb);
        return std::move(res);
    };

    {
        const std::string complaint = params.hierarchy_complaint();
        if (!complaint.empty()) {
            hypothesis_warnings.push_back(complaint);
            log_stage("params", "hierarchy check", "", complaint);
        }
    }

    // Degenerate trees never need the machinery.
    if (t.order() == 1 && g.order() >= 1) {
        Embedding emb{t, g, std::vector<int>(static_cast<std::size_t>(t.ambient_n), -1)};
        emb.image[t.root] = g.verts.front();
        log_stage("degenerate", "single-vertex tree embedded", "", "");
        return accept_embedding(std::move(emb));
    }
    if (t.order() == 2 && g.edge_count() > 0) {
        const Edge e = g.edges.front();
        Embedding emb{t, g, std::vector<int>(static_cast<std::size_t>(t.ambient_n), -1)};
        int other = -1;
        for (int v : t.verts)
            if (v != t.root) other = v;
        emb.image[t.root] = e.first;
        emb.image[other] = e.second;
        log_stage("degenerate", "single-edge tree embedded", "", "");
        return accept_embedding(std::move(emb));
    }

    // (a) Dense shortcut: e > 2dn leaves a min-degree d+1 core after peeling,
    // where the greedy embedding is guaranteed.
    if (t.order() >= 2 && g.edge_count() > 2 * d * n) {
        const Graph core = min_degree_peel(g, Q(Int(d)));
        const GreedyResult got = greedy_embed(core, t, core.verts.front());
        log_stage("dense-shortcut", "peel to min degree > d, greedy embed",
                  count_str("e", g.edge_count()) + " " + count_str("core", core.order()),
                  got.embedding ? "" : ("greedy failed despite the degree bound: " + got.failure));
        if (got.embedding) return accept_embedding(*got.embedding);
        caveats.push_back("dense shortcut failed unexpectedly: " + got.failure);
    }

    // (b) Greedy extraction of edge-disjoint order-m p-cut-dense hosts.
    Graph rest = g;
    std::vector<Graph> hosts;
    std::vector<CutCertificate> host_certs;
    const long long m = params.m;
    if (m < 2) {
        caveats.push_back("extraction skipped: host order m = " + std::to_string(m) +
                          " is below 2");
        log_stage("extraction", "skipped", count_str("m", m), caveats.back());
    } else {
        std::set<VertexSet> failed;
        long long failures = 0;
        bool scanning = true;
        while (scanning) {
            scanning = false;
            for (const Graph& comp : rest.components()) {
                if (comp.order() < m) continue;
                if (Q(Int(comp.edge_count())) <
                    params.p * Q(Int(comp.order()) * Int(comp.order())))
                    continue;
                if (failed.count(comp.verts)) continue;
                const std::uint64_t s =
                    params.seed + static_cast<std::uint64_t>(hosts.size()) * 7919ULL + 13ULL;
                const CoreSearchResult found =
                    find_cut_dense_subgraph(comp, params.p, params.p,
                                            Q(Int(m), Int(comp.order())), s,
                                            params.budgets.retries, params.budgets);
                if (found.core && found.core->order() == m) {
                    hosts.push_back(*found.core);
                    host_certs.push_back(found.certificate);
                    rest = rest.without_edges(found.core->edges);
                } else {
                    failed.insert(comp.verts);
                    ++failures;
                }
                scanning = true;
                break;
            }
        }
        if (failures > 0)
            caveats.push_back("cut-dense extraction gave up on " + std::to_string(failures) +
                              " eligible component state(s)");
        log_stage("extraction", "edge-disjoint order-m cut-dense hosts",
                  count_str("hosts", static_cast<long long>(hosts.size())) + " " +
                      count_str("rest_e", rest.edge_count()),
                  failures > 0 ? caveats.back() : "");
    }

    // (c) Heavy sparse remainder: try the expander route.
    if (t.order() >= 2 &&
        Q(Int(rest.edge_count())) > params.epsilon * Q(Int(d) * Int(n), Int(3))) {
        const Graph peeled = min_degree_peel(rest, params.epsilon * Q(Int(d), Int(6)));
        const ExpansionReport exp =
            expansion_check(peeled, Q(Int(10 * params.delta_cap)), 10 * t.order(),
                            params.seed, params.budgets);
        std::string cav;
        if (exp.pass) {
            const ExpanderResult er = expander_embed(peeled, t, params.delta_cap);
            if (er.embedding) {
                log_stage("expander", "peel + expansion check + expander embed",
                          count_str("peeled", peeled.order()), "");
                return accept_embedding(*er.embedding);
            }
            cav = "expander embedding failed: " + er.failure;
        } else {
            cav = "expansion check failed on the peeled remainder";
        }
        hypothesis_warnings.push_back(cav);
        caveats.push_back(cav);
        log_stage("expander", "peel + expansion check", count_str("peeled", peeled.order()),
                  cav);
    }

    // (d) Clumps and the joining loop, guarded by the large-M trigger.
    std::vector<Clump> clumps;
    clumps.reserve(hosts.size());
    for (std::size_t i = 0; i < hosts.size(); ++i)
        clumps.push_back(init_clump(hosts[i], params, &host_certs[i]));

    const long long k_cap = floor_ll(Q(1) / params.kappa);
    std::set<int> tried_centers;
    long long joins = 0;
    auto d_verts_of = [&](const Clump& k) { return derive_sets(k, g, params).d_graph.verts; };
    {
        bool moved = true;
        while (moved) {
            moved = false;
            // Guard: any clump whose matched set already fits the target size
            // goes straight to the dense embedding.
            for (std::size_t i = 0; i < clumps.size(); ++i) {
                if (tried_centers.count(static_cast<int>(i))) continue;
                const VertexSet mv = clumps[i].m_vertices();
                if (Q(Int(mv.size())) < params.big_c * Q(Int(d))) continue;
                TriggerPayload payload;
                payload.center = static_cast<int>(i);
                const StagedEmbedResult ser =
                    clump_embed_trigger(clumps, ClumpTrigger::LargeM, payload, t, params);
                if (ser.embedding) {
                    log_stage("joining", "large-M trigger",
                              count_str("clump", static_cast<long long>(i)), "");
                    return accept_embedding(*ser.embedding);
                }
                tried_centers.insert(static_cast<int>(i));
                const std::string cav = "large-M trigger failed at clump " + std::to_string(i) +
                                        " (stage " + ser.stage_failed + ")";
                hypothesis_warnings.push_back(cav);
                caveats.push_back(cav);
                moved = true;
                break;
            }
            if (moved) continue;

            std::vector<VertexSet> dsets(clumps.size());
            for (std::size_t i = 0; i < clumps.size(); ++i) dsets[i] = d_verts_of(clumps[i]);
            for (std::size_t i = 0; i < clumps.size() && !moved; ++i) {
                if (clumps[i].k > k_cap) continue;
                for (std::size_t j = i + 1; j < clumps.size() && !moved; ++j) {
                    if (clumps[j].k > k_cap) continue;
                    const long long overlap =
                        static_cast<long long>(set_intersect(dsets[i], dsets[j]).size());
                    if (overlap <
                        join_overlap_threshold(params, std::max(clumps[i].k, clumps[j].k)))
                        continue;
                    clumps[i] = join_clumps(clumps[i], clumps[j], params, g);
                    clumps.erase(clumps.begin() + static_cast<long>(j));
                    tried_centers.clear();
                    ++joins;
                    moved = true;
                }
            }
        }
    }
    log_stage("joining", "clump joining loop",
              count_str("clumps", static_cast<long long>(clumps.size())) + " " +
                  count_str("joins", joins),
              "");

    std::vector<VertexSet> dsets(clumps.size());
    for (std::size_t i = 0; i < clumps.size(); ++i) dsets[i] = d_verts_of(clumps[i]);

    // (e) Overlap fan: a center meeting many other D-sets yields a cut-dense
    // union ready for the dense embedding.
    if (!clumps.empty()) {
        const long long fan_need =
            ceil_ll(params.big_c * pow_q(Q(1) / params.p, 3) * Q(Int(params.h)));
        const long long overlap_min = std::max(1LL, ceil_ll(params.gamma * Q(Int(m))));
        const long long iset_size = std::max(1LL, ceil_ll(params.mu * Q(Int(m))));
        for (std::size_t c = 0; c < clumps.size(); ++c) {
            long long fan = 0;
            std::vector<int> filtered;
            for (std::size_t j = 0; j < clumps.size(); ++j) {
                if (j == c) continue;
                const VertexSet inter = set_intersect(dsets[c], dsets[j]);
                if (static_cast<long long>(inter.size()) >= overlap_min) ++fan;
                if (static_cast<long long>(inter.size()) >= iset_size)
                    filtered.push_back(static_cast<int>(j));
            }
            if (fan < fan_need) continue;
            if (filtered.empty() ||
                static_cast<long long>(dsets[c].size()) < iset_size) {
                caveats.push_back("overlap fan at clump " + std::to_string(c) +
                                  " had no member with a full-size intersection");
                continue;
            }
            TriggerPayload payload;
            payload.center = static_cast<int>(c);
            payload.members = filtered;
            payload.i_sets.push_back(lowest_k(dsets[c], iset_size));
            for (int j : filtered)
                payload.i_sets.push_back(lowest_k(set_intersect(dsets[c], dsets[j]), iset_size));
            const StagedEmbedResult ser =
                clump_embed_trigger(clumps, ClumpTrigger::ManyOverlaps, payload, t, params);
            log_stage("overlap-fan", "many-overlaps trigger",
                      count_str("center", static_cast<long long>(c)) + " " +
                          count_str("members", static_cast<long long>(filtered.size())),
                      ser.embedding ? "" : ("failed at stage " + ser.stage_failed));
            if (ser.embedding) return accept_embedding(*ser.embedding);
            const std::string cav =
                "many-overlaps trigger failed at clump " + std::to_string(c);
            hypothesis_warnings.push_back(cav);
            caveats.push_back(cav);
        }
    }

    // (f) Greedy low-overlap ordering; a stuck ordering means the D-sets
    // interlock enough to host a subdivision of the perfect pattern.
    std::vector<int> order;
    {
        const long long s_thresh =
            std::max(1LL, ceil_ll(params.alpha * Q(Int(d), Int(10))));
        const long long t_thresh = std::max(1LL, ceil_ll(params.gamma * Q(Int(m))));
        std::vector<int> remaining(clumps.size());
        for (std::size_t i = 0; i < clumps.size(); ++i) remaining[i] = static_cast<int>(i);
        bool subdivision_tried = false;
        long long forced = 0;
        while (!remaining.empty()) {
            int pick_at = -1;
            long long best_overlap = -1;
            int min_at = 0;
            for (std::size_t a = 0; a < remaining.size(); ++a) {
                VertexSet others;
                for (std::size_t b = 0; b < remaining.size(); ++b)
                    if (b != a) others = set_union(others, dsets[remaining[b]]);
                const long long ov =
                    static_cast<long long>(set_intersect(dsets[remaining[a]], others).size());
                if (best_overlap < 0 || ov < best_overlap) {
                    best_overlap = ov;
                    min_at = static_cast<int>(a);
                }
                if (ov < s_thresh) {
                    pick_at = static_cast<int>(a);
                    break;
                }
            }
            if (pick_at < 0 && !subdivision_tried) {
                subdivision_tried = true;
                // Incidence structure: clump nodes on side B, host vertices in
                // two or more remaining D-sets on side A.
                const int s = static_cast<int>(remaining.size());
                std::map<int, int> multiplicity;
                for (int r : remaining)
                    for (int v : dsets[r]) multiplicity[v] += 1;
                VertexSet multi;
                for (const auto& kv : multiplicity)
                    if (kv.second >= 2) multi.push_back(kv.first);
                EdgeSet bip_edges;
                for (int b = 0; b < s; ++b)
                    for (int idx = 0; idx < static_cast<int>(multi.size()); ++idx)
                        if (set_contains(dsets[remaining[b]], multi[idx]))
                            bip_edges.push_back({b, s + idx});
                const Graph bip =
                    Graph::make(s + static_cast<int>(multi.size()), bip_edges);
                VertexSet side_b, side_a;
                for (int b = 0; b < s; ++b) side_b.push_back(b);
                for (int idx = 0; idx < static_cast<int>(multi.size()); ++idx)
                    side_a.push_back(s + idx);
                const RootedTree pattern = RootedTree::perfect_tree(params.L, params.L);
                std::string cav;
                if (multi.empty()) {
                    cav = "ordering stuck but no host vertex lies in two D-sets";
                } else {
                    const SubdivisionResult sub =
                        find_1_subdivision(bip, side_a, side_b, pattern, t_thresh, s_thresh,
                                           params.seed, params.budgets.retries);
                    if (sub.witness) {
                        TriggerPayload payload;
                        payload.s_tree = sub.witness->pattern;
                        for (int v : pattern.verts)
                            payload.members.push_back(remaining[sub.witness->branch_map[v]]);
                        for (const auto& kv : sub.witness->middle_map)
                            payload.connectors[kv.first] = multi[kv.second - s];
                        const StagedEmbedResult ser = clump_embed_trigger(
                            clumps, ClumpTrigger::SubdivisionTree, payload, t, params);
                        log_stage("ordering", "subdivision trigger",
                                  count_str("pieces", pattern.order()),
                                  ser.embedding ? "" : ("failed at stage " + ser.stage_failed));
                        if (ser.embedding) return accept_embedding(*ser.embedding);
                        cav = "subdivision trigger failed at stage " + ser.stage_failed;
                    } else {
                        cav = "no subdivision witness: " + sub.failure;
                    }
                }
                hypothesis_warnings.push_back(cav);
                caveats.push_back(cav);
                continue;  // fall back to the forced pick on the next pass
            }
            if (pick_at < 0) {
                pick_at = min_at;
                ++forced;
            }
            order.push_back(remaining[pick_at]);
            remaining.erase(remaining.begin() + pick_at);
        }
        if (forced > 0)
            caveats.push_back("ordering forced past the overlap threshold " +
                              std::to_string(forced) + " time(s)");
        log_stage("ordering", "greedy low-overlap ordering",
                  count_str("clumps", static_cast<long long>(order.size())) + " " +
                      count_str("forced", forced),
                  forced > 0 ? caveats.back() : "");
    }

    // (g) Certificate: delete the sparse remainder, the non-B edges of each
    // clump, and the overlap edges toward later D-sets; cover what is left.
    DeletionCertificate cert;
    cert.params_used = params;
    cert.accounting.sparse_edges = rest.edge_count();
    EdgeSet deleted = rest.edges;
    std::vector<Graph> j_graphs;
    {
        std::vector<VertexSet> suffix(order.size());
        for (std::size_t pos = order.size(); pos-- > 0;)
            suffix[pos] = (pos + 1 < order.size())
                              ? set_union(suffix[pos + 1], dsets[order[pos + 1]])
                              : VertexSet{};
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const Clump& k = clumps[order[pos]];
            const DerivedSets ds = derive_sets(k, g, params);
            const Graph j_graph = ds.b_graph.without_vertices(suffix[pos]);
            const EdgeSet non_b = edge_difference(k.graph.edges, ds.b_graph.edges);
            const EdgeSet overlap = edge_difference(ds.b_graph.edges, j_graph.edges);
            cert.accounting.non_b_edges += static_cast<long long>(non_b.size());
            cert.accounting.overlap_edges += static_cast<long long>(overlap.size());
            deleted.insert(deleted.end(), non_b.begin(), non_b.end());
            deleted.insert(deleted.end(), overlap.begin(), overlap.end());
            j_graphs.push_back(j_graph);
        }
    }
    std::sort(deleted.begin(), deleted.end());
    deleted.erase(std::unique(deleted.begin(), deleted.end()), deleted.end());
    cert.deleted_edges = std::move(deleted);

    {
        VertexSet hv;
        EdgeSet he;
        for (const Graph& j : j_graphs) {
            hv = set_union(hv, j.verts);
            he.insert(he.end(), j.edges.begin(), j.edges.end());
        }
        std::sort(he.begin(), he.end());
        const Graph h = Graph::make_on(g.ambient_n, hv, he);
        for (const Graph& comp : h.components()) {
            if (comp.edge_count() == 0) continue;
            int owner = -1;
            for (std::size_t pos = 0; pos < j_graphs.size(); ++pos)
                if (set_contains(j_graphs[pos].verts, comp.verts.front())) {
                    owner = static_cast<int>(pos);
                    break;
                }
            if (owner < 0)
                throw ValidationError("hyperstability: component escaped every J graph");
            cert.components.push_back(
                {comp, set_intersect(clumps[order[owner]].m_vertices(), comp.verts)});
        }
    }
    for (const Clump& k : clumps) {
        if (k.flags.regular_budget_limited)
            caveats.push_back("a regular family hit the search budget");
        if (k.flags.core_bound_below_floor)
            caveats.push_back("a clump core bound was clamped at the floor");
        if (k.flags.core_cert_heuristic)
            caveats.push_back("a clump core density was vouched non-exhaustively");
    }
    std::sort(caveats.begin(), caveats.end());
    caveats.erase(std::unique(caveats.begin(), caveats.end()), caveats.end());
    cert.caveats = caveats;

    const CertificateAudit audit = validate_certificate(g, t, cert);
    log_stage("certificate", "deletion + cover emission",
              count_str("deleted", static_cast<long long>(cert.deleted_edges.size())) + " " +
                  count_str("components", static_cast<long long>(cert.components.size())),
              audit.pass ? "" : audit.reasons.front());
    if (audit.pass) {
        res.outcome = Outcome::Certificate;
        res.certificate = std::move(cert);
        return res;
    }
    res.outcome = Outcome::Inconclusive;
    res.inconclusive_reason = audit.reasons.front();
    if (!hypothesis_warnings.empty())
        res.inconclusive_reason += "; first unmet hypothesis: " + hypothesis_warnings.front();
    res.certificate = std::move(cert);  // kept for inspection despite the failure
    return res;
}

CertificateAudit validate_certificate(const Graph& g, const RootedTree& t,
                                      const DeletionCertificate& cert, bool check_t_freeness) {
    CertificateAudit audit;
    const long long d = t.order();
    const long long n = g.order();
    const Q eps = cert.params_used.epsilon;

    EdgeSet deleted = cert.deleted_edges;
    std::sort(deleted.begin(), deleted.end());
    if (std::adjacent_find(deleted.begin(), deleted.end()) != deleted.end())
        audit.reasons.push_back("deleted edge list contains duplicates");
    deleted.erase(std::unique(deleted.begin(), deleted.end()), deleted.end());
    for (const Edge& e : deleted)
        if (!g.has_edge(e.first, e.second)) {
            audit.reasons.push_back("deleted edge (" + std::to_string(e.first) + "," +
                                    std::to_string(e.second) + ") is not in the graph");
            break;
        }

    {
        const long long total = cert.accounting.sparse_edges + cert.accounting.non_b_edges +
                                cert.accounting.overlap_edges;
        if (total != static_cast<long long>(cert.deleted_edges.size()))
            audit.reasons.push_back("accounting sums to " + std::to_string(total) +
                                    " but " + std::to_string(cert.deleted_edges.size()) +
                                    " edges were deleted");
    }

    audit.deleted_vs_target = static_cast<long long>(deleted.size()) -
                              ceil_ll(eps * Q(Int(d) * Int(n)));
    if (Q(Int(deleted.size())) > eps * Q(Int(d) * Int(n)))
        audit.reasons.push_back("deleted " + std::to_string(deleted.size()) +
                                " edges, above the eps*d*n allowance " +
                                to_string(eps * Q(Int(d) * Int(n))));

    // Disjointness, containment, and exact coverage of the remainder.
    const EdgeSet remaining = edge_difference(g.edges, deleted);
    std::set<Edge> covered;
    std::vector<char> vertex_seen(static_cast<std::size_t>(g.ambient_n), 0);
    audit.cover_target = (Q(2) + eps) * Q(Int(d));
    for (std::size_t i = 0; i < cert.components.size(); ++i) {
        const Graph& comp = cert.components[i].component;
        const VertexSet& cover = cert.components[i].cover;
        for (int v : comp.verts) {
            if (v >= g.ambient_n || vertex_seen[v]) {
                audit.reasons.push_back("component " + std::to_string(i) +
                                        " shares vertex " + std::to_string(v) +
                                        " with an earlier component");
                break;
            }
            vertex_seen[v] = 1;
        }
        for (const Edge& e : comp.edges) {
            if (!std::binary_search(remaining.begin(), remaining.end(), e)) {
                audit.reasons.push_back("component " + std::to_string(i) + " keeps edge (" +
                                        std::to_string(e.first) + "," +
                                        std::to_string(e.second) +
                                        ") which is deleted or absent");
                break;
            }
            covered.insert(e);
        }
        bool cover_ok = true;
        for (int v : cover)
            if (!set_contains(comp.verts, v)) {
                audit.reasons.push_back("component " + std::to_string(i) +
                                        " cover leaves the component at vertex " +
                                        std::to_string(v));
                cover_ok = false;
                break;
            }
        if (cover_ok)
            for (const Edge& e : comp.edges)
                if (!set_contains(cover, e.first) && !set_contains(cover, e.second)) {
                    audit.reasons.push_back("component " + std::to_string(i) +
                                            " edge (" + std::to_string(e.first) + "," +
                                            std::to_string(e.second) + ") is uncovered");
                    break;
                }
        audit.max_cover = std::max(audit.max_cover, static_cast<long long>(cover.size()));
        if (Q(Int(cover.size())) > audit.cover_target)
            audit.reasons.push_back("component " + std::to_string(i) + " cover has " +
                                    std::to_string(cover.size()) +
                                    " vertices, above (2+eps)d = " +
                                    to_string(audit.cover_target));
        if (check_t_freeness && comp.order() >= t.order()) {
            const oracle::ContainResult cr = oracle::contains_tree(comp, t, 5'000'000);
            if (cr.contains)
                audit.warnings.push_back("component " + std::to_string(i) +
                                         " still contains the tree");
            else if (!cr.exhausted)
                audit.warnings.push_back("t-freeness check ran out of budget on component " +
                                         std::to_string(i));
        }
    }
    if (covered.size() != remaining.size())
        audit.reasons.push_back(
            "coverage gap: " +
            std::to_string(remaining.size() - std::min(covered.size(), remaining.size())) +
            " remaining edge(s) lie in no component");

    audit.pass = audit.reasons.empty();
    return audit;
}

}  // namespace treestab
