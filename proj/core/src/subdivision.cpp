#include "treestab/subdivision.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treestab/errors.hpp"
#include "treestab/rng.hpp"
#include "treestab/tree_embed.hpp"

namespace treestab {

namespace {

Edge norm_edge(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// Greedy parity-constrained embedding of the subdivided pattern: branch
// vertices (original labels) land in allowed_b, middles in allowed_a.
struct ParityEmbed {
    std::vector<int> image;  // subdivided-tree ambient indexed
    bool ok = false;
};

ParityEmbed parity_greedy(const Graph& host, const RootedTree& sub_tree, int pattern_ambient,
                          const VertexSet& allowed_b, const VertexSet& allowed_a, int anchor) {
    ParityEmbed out;
    out.image.assign(static_cast<std::size_t>(sub_tree.ambient_n), -1);
    std::vector<char> used(static_cast<std::size_t>(host.ambient_n), 0);
    out.image[sub_tree.root] = anchor;
    used[anchor] = 1;
    for (int v : sub_tree.bfs_order()) {
        if (v == sub_tree.root) continue;
        const int img_p = out.image[sub_tree.parent[v]];
        const VertexSet& side = (v < pattern_ambient) ? allowed_b : allowed_a;
        int pick = -1;
        for (int w : host.neighbors(img_p)) {
            if (used[w] || !set_contains(side, w)) continue;
            pick = w;
            break;
        }
        if (pick < 0) return out;
        out.image[v] = pick;
        used[pick] = 1;
    }
    out.ok = true;
    return out;
}

// The pattern with every edge replaced by a path of length 2; the middle of
// the edge (parent(c), c) gets label pattern_ambient + c. The label space
// 2*amb has holes (at least amb + root), and from_parents only accepts full
// spaces, so unused labels are parked under the root and restricted away.
RootedTree subdivide(const RootedTree& pattern) {
    const int amb = pattern.ambient_n;
    std::vector<int> parent(static_cast<std::size_t>(2 * amb), -2);
    parent[pattern.root] = -1;
    VertexSet used{pattern.root};
    for (int c : pattern.verts) {
        if (c == pattern.root) continue;
        parent[amb + c] = pattern.parent[c];
        parent[c] = amb + c;
        used.push_back(c);
        used.push_back(amb + c);
    }
    for (int v = 0; v < 2 * amb; ++v)
        if (parent[v] == -2) parent[v] = pattern.root;
    std::sort(used.begin(), used.end());
    return RootedTree::from_parents(2 * amb, pattern.root, parent)
        .restricted_to(used, pattern.root);
}

SubdivisionWitness harvest(const RootedTree& pattern, const std::vector<int>& sub_image) {
    SubdivisionWitness w;
    w.pattern = pattern;
    w.branch_map.assign(static_cast<std::size_t>(pattern.ambient_n), -1);
    for (int v : pattern.verts) w.branch_map[v] = sub_image[v];
    for (int c : pattern.verts) {
        if (c == pattern.root) continue;
        w.middle_map[{pattern.parent[c], c}] = sub_image[pattern.ambient_n + c];
    }
    return w;
}

}  // namespace

bool validate_subdivision(const Graph& bip, const VertexSet& side_a,
                          const VertexSet& side_b, const SubdivisionWitness& w,
                          std::string* why) {
    auto fail = [why](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!set_intersect(side_a, side_b).empty()) return fail("sides are not disjoint");
    if (w.pattern.order() == 0) return fail("empty pattern");
    if (static_cast<int>(w.branch_map.size()) < w.pattern.ambient_n)
        return fail("branch_map shorter than the pattern label space");

    std::vector<char> used(static_cast<std::size_t>(bip.ambient_n), 0);
    for (int v : w.pattern.verts) {
        const int b = w.branch_map[v];
        if (b < 0 || b >= bip.ambient_n || !bip.has_vertex(b))
            return fail("branch vertex " + std::to_string(v) + " unmapped or outside the host");
        if (!set_contains(side_b, b))
            return fail("branch image " + std::to_string(b) + " is not in side B");
        if (used[b]) return fail("not injective at host vertex " + std::to_string(b));
        used[b] = 1;
    }
    if (w.middle_map.size() != static_cast<std::size_t>(w.pattern.order() - 1))
        return fail("middle_map has " + std::to_string(w.middle_map.size()) + " entries; " +
                    std::to_string(w.pattern.order() - 1) + " pattern edges expected");
    for (int c : w.pattern.verts) {
        if (c == w.pattern.root) continue;
        const int p = w.pattern.parent[c];
        auto it = w.middle_map.find({p, c});
        if (it == w.middle_map.end())
            return fail("no middle for pattern edge (" + std::to_string(p) + "," +
                        std::to_string(c) + ")");
        const int a = it->second;
        if (a < 0 || a >= bip.ambient_n || !bip.has_vertex(a))
            return fail("middle for edge (" + std::to_string(p) + "," + std::to_string(c) +
                        ") outside the host");
        if (!set_contains(side_a, a))
            return fail("middle image " + std::to_string(a) + " is not in side A");
        if (used[a]) return fail("not injective at host vertex " + std::to_string(a));
        used[a] = 1;
        if (!bip.has_edge(w.branch_map[p], a) || !bip.has_edge(a, w.branch_map[c]))
            return fail("missing edge: middle " + std::to_string(a) +
                        " must see both branch images of (" + std::to_string(p) + "," +
                        std::to_string(c) + ")");
    }
    return true;
}

SubdivisionResult find_1_subdivision(const Graph& bip, const VertexSet& side_a,
                                     const VertexSet& side_b, const RootedTree& pattern,
                                     long long t_thresh, long long s_thresh,
                                     std::uint64_t seed, int retries) {
    if (pattern.order() == 0) throw PreconditionError("find_1_subdivision: empty pattern");
    if (!set_intersect(side_a, side_b).empty())
        throw PreconditionError("find_1_subdivision: sides overlap");
    if (set_union(side_a, side_b) != bip.verts)
        throw PreconditionError("find_1_subdivision: sides do not partition the host vertices");
    for (const Edge& e : bip.edges) {
        const bool a_first = set_contains(side_a, e.first);
        const bool a_second = set_contains(side_a, e.second);
        if (a_first == a_second)
            throw PreconditionError("find_1_subdivision: edge (" + std::to_string(e.first) +
                                    "," + std::to_string(e.second) + ") does not cross the sides");
    }
    for (int a : side_a)
        if (bip.degree(a) < 2)
            throw PreconditionError("find_1_subdivision: A-vertex " + std::to_string(a) +
                                    " has degree " + std::to_string(bip.degree(a)) + " < 2");

    SubdivisionResult result;

    // Common-neighbourhood profile over B-pairs, via the A side.
    {
        std::map<Edge, long long> common;
        for (int a : side_a) {
            const std::vector<int>& nb = bip.neighbors(a);
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    common[norm_edge(nb[i], nb[j])] += 1;
        }
        for (const auto& kv : common) {
            if (kv.second >= t_thresh) result.pairs_at_t_thresh += 1;
            if (kv.second >= s_thresh) result.pairs_at_s_thresh += 1;
        }
    }

    const int k = pattern.order();
    if (side_b.empty()) {
        result.failure = "side B is empty";
        return result;
    }
    if (k == 1) {
        SubdivisionWitness w;
        w.pattern = pattern;
        w.branch_map.assign(static_cast<std::size_t>(pattern.ambient_n), -1);
        w.branch_map[pattern.root] = side_b.front();
        result.witness = std::move(w);
        return result;
    }

    VertexSet a_small, a_large;
    long long e_large = 0;
    for (int a : side_a) {
        if (bip.degree(a) >= 8LL * k) {
            a_large.push_back(a);
            e_large += bip.degree(a);
        } else {
            a_small.push_back(a);
        }
    }
    const bool heavy_first = (2 * e_large >= bip.edge_count());

    const RootedTree sub_tree = subdivide(pattern);

    // Heavy branch: peel the large-degree half to min degree 2k, then embed
    // the subdivided pattern greedily with parity constraints.
    auto large_branch = [&]() -> std::optional<SubdivisionWitness> {
        if (a_large.empty()) return std::nullopt;
        const Graph host = peel_below(bip.induced(set_union(a_large, side_b)), 2LL * k - 1);
        if (host.order() == 0) return std::nullopt;
        const VertexSet b_live = set_intersect(host.verts, side_b);
        const VertexSet a_live = set_intersect(host.verts, side_a);
        for (int anchor : b_live) {
            ParityEmbed got =
                parity_greedy(host, sub_tree, pattern.ambient_n, b_live, a_live, anchor);
            if (got.ok) return harvest(pattern, got.image);
        }
        return std::nullopt;
    };

    // Random branch: prune each small A-vertex to 2 random edges, contract
    // onto B, peel toward min degree k (densest core as a fallback), embed the
    // pattern, then uncontract injectively.
    auto small_branch = [&](Rng rng) -> std::optional<SubdivisionWitness> {
        if (a_small.empty()) return std::nullopt;
        std::map<Edge, VertexSet> realizers;
        for (int a : a_small) {
            const VertexSet pick = rng.sample_without_replacement(bip.neighbors(a), 2);
            realizers[norm_edge(pick[0], pick[1])].push_back(a);
        }
        EdgeSet s_edges;
        for (const auto& kv : realizers) s_edges.push_back(kv.first);
        Graph s_graph = Graph::make_on(bip.ambient_n, side_b, s_edges);
        Graph core = peel_below(s_graph, static_cast<long long>(k) - 1);
        for (long long c = k - 1; core.order() == 0 && c >= 1; --c)
            core = peel_below(s_graph, c - 1);
        if (core.order() == 0) return std::nullopt;
        for (int anchor : core.verts) {
            GreedyResult got = greedy_embed(core, pattern, anchor);
            if (!got.embedding) continue;
            // Uncontract: every pattern edge picks the lowest unused pruned
            // A-vertex realizing its contracted image edge.
            std::vector<char> used_a(static_cast<std::size_t>(bip.ambient_n), 0);
            std::vector<int> sub_image(static_cast<std::size_t>(sub_tree.ambient_n), -1);
            for (int v : pattern.verts) sub_image[v] = got.embedding->at(v);
            bool complete = true;
            for (int c : pattern.verts) {
                if (c == pattern.root) continue;
                const Edge key =
                    norm_edge(got.embedding->at(c), got.embedding->at(pattern.parent[c]));
                auto it = realizers.find(key);
                int chosen = -1;
                if (it != realizers.end())
                    for (int a : it->second)
                        if (!used_a[a]) {
                            chosen = a;
                            break;
                        }
                if (chosen < 0) {
                    complete = false;
                    break;
                }
                used_a[chosen] = 1;
                sub_image[pattern.ambient_n + c] = chosen;
            }
            if (complete) return harvest(pattern, sub_image);
        }
        return std::nullopt;
    };

    std::optional<SubdivisionWitness> found;
    const int rounds = std::max(1, retries);
    bool large_tried = false;
    for (int attempt = 0; attempt < rounds && !found; ++attempt) {
        Rng rng = Rng(seed).split(static_cast<std::uint64_t>(attempt));
        if (heavy_first && !large_tried) {
            large_tried = true;
            found = large_branch();
            if (found) break;
        }
        found = small_branch(rng);
        if (!found && !large_tried) {
            large_tried = true;
            found = large_branch();
        }
    }
    if (!found) {
        result.failure = "neither branch produced a witness (A_large " +
                         std::to_string(a_large.size()) + ", A_small " +
                         std::to_string(a_small.size()) + ", " + std::to_string(rounds) +
                         " attempt(s))";
        return result;
    }
    std::string why;
    if (!validate_subdivision(bip, side_a, side_b, *found, &why))
        throw ValidationError("find_1_subdivision: constructed witness invalid: " + why);
    result.witness = std::move(found);
    return result;
}

}  // namespace treestab
