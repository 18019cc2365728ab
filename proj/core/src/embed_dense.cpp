#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treestab/errors.hpp"
#include "treestab/rng.hpp"
#include "treestab/tree_embed.hpp"

namespace treestab {

namespace {

int tree_max_degree(const RootedTree& t) {
    int best = 0;
    for (int v : t.verts) {
        int deg = static_cast<int>(t.children[v].size()) + (t.parent[v] >= 0 ? 1 : 0);
        best = std::max(best, deg);
    }
    return best;
}

// Free vertices of g as a sorted set (used is ambient-indexed).
VertexSet free_vertices(const Graph& g, const std::vector<char>& used) {
    VertexSet out;
    for (int v : g.verts)
        if (!used[v]) out.push_back(v);
    return out;
}

}  // namespace

StagedEmbedResult embed_cut_dense(const Graph& g, const Graph& r_sub, const RootedTree& t,
                                  const ParamHierarchy& params, std::uint64_t seed) {
    if (t.order() == 0) throw PreconditionError("embed_cut_dense: empty tree");
    if (!r_sub.is_subgraph_of(g))
        throw PreconditionError("embed_cut_dense: r_sub is not a subgraph of the host");
    const Q need = (Q(2) + Q(2) * params.epsilon) * Q(Int(t.order()));
    if (Q(Int(r_sub.order())) < need)
        throw PreconditionError("embed_cut_dense: |r_sub| = " + std::to_string(r_sub.order()) +
                                " below (2+2eps)|t| = " + to_string(need));
    const int cap = tree_max_degree(t);
    if (cap > params.delta_cap)
        throw PreconditionError("embed_cut_dense: tree degree " + std::to_string(cap) +
                                " exceeds delta_cap " + std::to_string(params.delta_cap));

    StagedEmbedResult out;
    auto log = [&out](const std::string& stage, const std::string& msg) {
        out.stage_log.push_back(stage + ": " + msg);
    };
    const int retries = std::max(1, params.budgets.retries);

    // Stage 1: one-shot greedy from a high-degree anchor inside r_sub.
    {
        int tried = 0;
        for (int a : r_sub.verts) {
            if (g.degree(a) < cap) continue;
            if (tried >= retries) break;
            ++tried;
            GreedyResult direct = greedy_embed(g, t, a);
            if (direct.embedding) {
                log("direct", "greedy embedding from anchor " + std::to_string(a) +
                                  (direct.guaranteed ? " (guarantee regime held)" : ""));
                out.embedding = std::move(direct.embedding);
                return out;
            }
        }
        log("direct", std::to_string(tried) + " anchor(s) tried, none completed one-shot");
    }

    // Stage 2: draw delta_cap pairwise-disjoint reservoir sets at rate alpha.
    const int n = g.order();
    const long long res_size = std::max<long long>(1, floor_ll(params.alpha * Q(Int(n))));
    const int res_count = std::max(1, params.delta_cap);
    std::vector<VertexSet> reservoirs;
    for (int attempt = 0; attempt < retries && reservoirs.empty(); ++attempt) {
        Rng stream = Rng(seed).split(101 + static_cast<std::uint64_t>(attempt));
        VertexSet pool = g.verts;
        std::vector<VertexSet> draft;
        for (int j = 0; j < res_count; ++j) {
            if (static_cast<long long>(pool.size()) < res_size) break;
            VertexSet pick =
                stream.sample_without_replacement(pool, static_cast<std::size_t>(res_size));
            pool = set_minus(pool, pick);
            draft.push_back(std::move(pick));
        }
        if (static_cast<int>(draft.size()) == res_count) reservoirs = std::move(draft);
    }
    if (reservoirs.empty()) {
        out.stage_failed = "reservoirs";
        log("reservoirs", "could not draw " + std::to_string(res_count) + " disjoint sets of " +
                              std::to_string(res_size) + " vertices from a host of order " +
                              std::to_string(n));
        return out;
    }
    log("reservoirs",
        std::to_string(res_count) + " sets of " + std::to_string(res_size) + " drawn");

    // Stage 3: split the tree and embed the root part outside the reservoirs.
    SplitResult split = split_tree(t, Q(1, 2), params.delta_cap);
    VertexSet reserved;
    for (const VertexSet& r : reservoirs) reserved = set_union(reserved, r);
    Graph head_host = g.without_vertices(reserved);
    std::optional<Embedding> head;
    {
        int tried = 0;
        for (int a : r_sub.verts) {
            if (!head_host.has_vertex(a) || head_host.degree(a) < cap) continue;
            if (tried >= retries) break;
            ++tried;
            GreedyResult got = greedy_embed(head_host, split.q_subtree, a);
            if (got.embedding) {
                head = std::move(got.embedding);
                log("split", "root part (" + std::to_string(split.q_subtree.order()) +
                                 " vertices) embedded from r_sub anchor " + std::to_string(a));
                break;
            }
        }
        if (!head) {
            // Relax the anchor pool to the whole reservoir-free host.
            int extra = 0;
            for (int a : head_host.verts) {
                if (head_host.degree(a) < cap) continue;
                if (extra >= retries) break;
                ++extra;
                GreedyResult got = greedy_embed(head_host, split.q_subtree, a);
                if (got.embedding) {
                    head = std::move(got.embedding);
                    log("split", "root part embedded from fallback anchor " + std::to_string(a));
                    break;
                }
            }
        }
    }
    if (!head) {
        out.stage_failed = "greedy-completion";
        log("greedy-completion", "no anchor admitted the root part of order " +
                                     std::to_string(split.q_subtree.order()));
        return out;
    }

    // Stage 4: reattach each shed component through its reservoir.
    std::vector<char> used(static_cast<std::size_t>(g.ambient_n), 0);
    for (int v : split.q_subtree.verts) used[head->at(v)] = 1;
    std::vector<Embedding> parts;
    for (std::size_t i = 0; i < split.components.size(); ++i) {
        const RootedTree& comp = split.components[i];
        const int y = split.externals[i];
        const int parent_v = t.parent[y];
        const int img_p = head->at(parent_v);
        const VertexSet& reservoir = reservoirs[i % reservoirs.size()];

        // Candidate anchors: free neighbours of the attachment image, the
        // designated reservoir first, then r_sub, then anything free.
        VertexSet tier1, tier2, tier3;
        for (int w : g.neighbors(img_p)) {
            if (used[w]) continue;
            if (set_contains(reservoir, w))
                tier1.push_back(w);
            else if (r_sub.has_vertex(w))
                tier2.push_back(w);
            else
                tier3.push_back(w);
        }

        // Connector-tree probe: locate the free r_sub/reservoir pool from the
        // attachment point. Height-1 leaves are adjacency certificates and
        // join the candidate list; deeper trees cannot be grafted onto t.
        {
            VertexSet free_all = free_vertices(g, used);
            VertexSet targets = set_intersect(
                free_all, set_union(reservoir, r_sub.verts));
            if (static_cast<int>(targets.size()) >= params.delta_cap) {
                Graph probe_host = g.induced(set_union(free_all, VertexSet{img_p}));
                ConnectorTree probe =
                    connector_tree(probe_host, img_p, targets, params.delta_cap, params.p);
                if (probe.ok && probe.height == 1) {
                    VertexSet fresh;
                    for (int leaf : probe.leaf_targets)
                        if (!set_contains(tier1, leaf) && !set_contains(tier2, leaf))
                            fresh.push_back(leaf);
                    tier1 = set_union(tier1, fresh);
                    log("connector", "component " + std::to_string(i) + ": height-1 tree, " +
                                         std::to_string(probe.leaf_targets.size()) +
                                         " adjacent targets");
                } else if (probe.ok) {
                    log("connector", "component " + std::to_string(i) +
                                         ": target pool at distance " +
                                         std::to_string(probe.height) + ", not graftable");
                }
            }
        }

        std::vector<int> candidates;
        for (int w : tier1) candidates.push_back(w);
        for (int w : tier2) candidates.push_back(w);
        for (int w : tier3) candidates.push_back(w);
        if (candidates.empty()) {
            out.stage_failed = "connector";
            log("connector", "component " + std::to_string(i) + ": attachment image " +
                                 std::to_string(img_p) + " has no free neighbour");
            return out;
        }

        bool placed = false;
        int attempts = 0;
        for (int a : candidates) {
            if (attempts >= retries) break;
            ++attempts;
            VertexSet free_all = free_vertices(g, used);
            // Tier A: reservoir plus free r_sub vertices. Tier B: all free.
            VertexSet narrow = set_intersect(free_all, set_union(reservoir, r_sub.verts));
            narrow = set_union(narrow, VertexSet{a});
            GreedyResult got = greedy_embed(g.induced(narrow), comp, a);
            if (!got.embedding)
                got = greedy_embed(g.induced(set_union(free_all, VertexSet{a})), comp, a);
            if (got.embedding) {
                for (int v : comp.verts) used[got.embedding->at(v)] = 1;
                parts.push_back(std::move(*got.embedding));
                placed = true;
                log("greedy-completion", "component " + std::to_string(i) + " (" +
                                             std::to_string(comp.order()) +
                                             " vertices) anchored at " + std::to_string(a));
                break;
            }
        }
        if (!placed) {
            out.stage_failed = "greedy-completion";
            log("greedy-completion", "component " + std::to_string(i) + " starved after " +
                                         std::to_string(attempts) + " anchor(s)");
            return out;
        }
    }

    Embedding base;
    base.tree = t;
    base.host = g;
    base.image = head->image;
    Embedding whole = combine_embeddings(base, parts);
    log("combine", "all " + std::to_string(t.order()) + " tree vertices placed and verified");
    out.embedding = std::move(whole);
    return out;
}

}  // namespace treestab
