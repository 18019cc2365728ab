#include "treestab/tree_embed.hpp"

#include <algorithm>
#include <deque>

#include "treestab/errors.hpp"

namespace treestab {

bool validate_embedding(const Embedding& emb, std::optional<int> anchor, std::string* why) {
    const auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (static_cast<int>(emb.image.size()) < emb.tree.ambient_n)
        return fail("image array shorter than the tree label space");
    std::vector<char> used(emb.host.ambient_n, 0);
    for (int v : emb.tree.verts) {
        const int h = emb.image[v];
        if (h < 0) return fail("tree vertex " + std::to_string(v) + " is unmapped");
        if (h >= emb.host.ambient_n || !emb.host.has_vertex(h))
            return fail("tree vertex " + std::to_string(v) + " maps outside the host");
        if (used[h]) return fail("host vertex " + std::to_string(h) + " is used twice");
        used[h] = 1;
    }
    for (int v : emb.tree.verts) {
        const int p = emb.tree.parent[v];
        if (p >= 0 && !emb.host.has_edge(emb.image[v], emb.image[p]))
            return fail("tree edge {" + std::to_string(v) + "," + std::to_string(p) +
                        "} maps to the non-edge {" + std::to_string(emb.image[v]) + "," +
                        std::to_string(emb.image[p]) + "}");
    }
    if (anchor && emb.image[emb.tree.root] != *anchor)
        return fail("root maps to " + std::to_string(emb.image[emb.tree.root]) +
                    ", not the anchor " + std::to_string(*anchor));
    return true;
}

GreedyResult greedy_embed(const Graph& g, const RootedTree& t, int anchor) {
    if (!g.has_vertex(anchor))
        throw PreconditionError("greedy_embed: anchor " + std::to_string(anchor) +
                                " is not a vertex of the host");
    GreedyResult result;

    // Guarantee check (sufficient, not necessary: the attempt runs either way
    // and the staged embedders lean on exactly that).
    {
        const Graph rest = g.without_vertices({anchor});
        result.guaranteed = g.degree(anchor) >= t.max_degree() &&
                            (rest.order() == 0 ||
                             Q(Int(rest.min_degree())) >= Q(Int(t.tree_edge_count())));
    }

    std::vector<int> image(t.ambient_n, -1);
    std::vector<char> used(g.ambient_n, 0);
    image[t.root] = anchor;
    used[anchor] = 1;
    for (int v : t.bfs_order()) {
        if (v == t.root) continue;
        const int pimg = image[t.parent[v]];
        int pick = -1;
        for (int w : g.neighbors(pimg))
            if (!used[w]) {
                pick = w;
                break;
            }
        if (pick < 0) {
            result.failure = "starved at tree vertex " + std::to_string(v) +
                             " (host vertex " + std::to_string(pimg) + " has no free neighbor)";
            return result;
        }
        image[v] = pick;
        used[pick] = 1;
    }
    result.embedding = Embedding{t, g, image};
    return result;
}

SplitResult split_tree(const RootedTree& t, const Q& lambda, int delta_cap) {
    if (t.max_degree() > delta_cap)
        throw PreconditionError("split_tree: max degree " + std::to_string(t.max_degree()) +
                                " exceeds delta_cap " + std::to_string(delta_cap));
    if (lambda < Q(0) || lambda >= Q(1))
        throw PreconditionError("split_tree: lambda must lie in [0,1)");

    SplitResult result;
    const int n = t.order();
    const int dt = std::max(1, t.max_degree());
    const Q upper = (Q(1) - lambda) * Q(Int(n)) + Q(Int(2 * dt));

    if (Q(Int(n)) <= upper) {  // the proof's trivial branch: Q = t
        result.q_subtree = t;
        return result;
    }

    // Descend to the deepest vertex whose subtree is still large: afterwards
    // every child subtree has order <= lambda*n while the subtree at v itself
    // exceeds lambda*n, so shedding children is both possible and sufficient.
    const Q limit = lambda * Q(Int(n));
    int v = t.root;
    for (;;) {
        int next = -1;
        for (int c : t.children[v])
            if (Q(Int(t.subtree_vertices(c).size())) > limit) {
                next = c;
                break;
            }
        if (next < 0) break;
        v = next;
    }

    VertexSet q_verts = t.verts;
    for (int c : t.children[v]) {
        if (Q(Int(q_verts.size())) <= upper) break;
        const VertexSet sub = t.subtree_vertices(c);
        q_verts = set_minus(q_verts, sub);
        result.components.push_back(t.subtree_at(c));
        result.externals.push_back(c);
    }
    result.q_subtree = t.restricted_to(q_verts, t.root);
    return result;
}

std::vector<std::pair<int, RootedTree>> external_vertices(const RootedTree& t,
                                                          const RootedTree& sub) {
    for (int v : sub.verts)
        if (!t.has_vertex(v))
            throw PreconditionError("external_vertices: sub vertex " + std::to_string(v) +
                                    " is not in t");
    if (!set_contains(sub.verts, t.root))
        throw PreconditionError("external_vertices: sub does not contain the root of t");

    const VertexSet outside = set_minus(t.verts, sub.verts);
    std::vector<char> seen(t.ambient_n, 0);
    std::vector<std::pair<int, RootedTree>> result;

    for (int start : outside) {
        if (seen[start]) continue;
        // Collect the component of t \ sub containing `start` (tree adjacency
        // is parent plus children).
        VertexSet comp;
        std::deque<int> work{start};
        seen[start] = 1;
        while (!work.empty()) {
            const int x = work.front();
            work.pop_front();
            comp.push_back(x);
            std::vector<int> nbrs = t.children[x];
            if (t.parent[x] >= 0) nbrs.push_back(t.parent[x]);
            for (int y : nbrs)
                if (set_contains(outside, y) && !seen[y]) {
                    seen[y] = 1;
                    work.push_back(y);
                }
        }
        std::sort(comp.begin(), comp.end());

        // The unique edge from the component into sub names the external
        // vertex; more than one would close a cycle in t.
        int external = -1, comp_root = -1;
        for (int x : comp) {
            const int p = t.parent[x];
            if (p >= 0 && set_contains(sub.verts, p)) {
                if (external >= 0)
                    throw ValidationError("external_vertices: component has two edges into sub");
                external = x;
            }
            if (p < 0 || !set_contains(comp, p)) comp_root = x;
            for (int c : t.children[x])
                if (set_contains(sub.verts, c))
                    throw ValidationError(
                        "external_vertices: sub vertex hangs below the component (sub is not "
                        "a rooted subtree)");
        }
        if (external < 0)
            throw ValidationError("external_vertices: component touches sub in no edge");
        result.emplace_back(external, t.restricted_to(comp, comp_root));
    }
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return result;
}

Embedding combine_embeddings(const Embedding& base, const std::vector<Embedding>& parts) {
    Embedding out = base;
    const auto part_name = [](int i) {
        return i < 0 ? std::string("base") : "part " + std::to_string(i);
    };

    // owner[h]: which piece placed host vertex h (-2 = nobody, -1 = base).
    std::vector<int> owner(base.host.ambient_n, -2);
    for (int v : base.tree.verts)
        if (base.maps(v)) owner[base.image[v]] = -1;

    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Embedding& part = parts[i];
        if (part.host.ambient_n != base.host.ambient_n ||
            part.tree.ambient_n != base.tree.ambient_n)
            throw ValidationError("combine_embeddings: part " + std::to_string(i) +
                                  " lives in a different label space");
        for (int v : part.tree.verts) {
            if (!base.tree.has_vertex(v))
                throw ValidationError("combine_embeddings: part " + std::to_string(i) +
                                      " covers tree vertex " + std::to_string(v) +
                                      " outside the base tree");
            if (!part.maps(v))
                throw ValidationError("combine_embeddings: part " + std::to_string(i) +
                                      " leaves tree vertex " + std::to_string(v) + " unmapped");
            const int h = part.image[v];
            if (out.image[v] >= 0) {
                if (out.image[v] != h)
                    throw ValidationError("combine_embeddings: part " + std::to_string(i) +
                                          " disagrees at tree vertex " + std::to_string(v));
                continue;  // consistent shared vertex (the allowed overlap)
            }
            if (owner[h] != -2)
                throw ValidationError("combine_embeddings: " + part_name(static_cast<int>(i)) +
                                      " and " + part_name(owner[h]) +
                                      " overlap at host vertex " + std::to_string(h));
            out.image[v] = h;
            owner[h] = static_cast<int>(i);
        }
    }

    std::string why;
    if (!validate_embedding(out, std::nullopt, &why))
        throw ValidationError("combine_embeddings: combined embedding invalid: " + why);
    return out;
}

ConnectorTree connector_tree(const Graph& g, int anchor, const VertexSet& u, int delta_cap,
                             const Q& q) {
    if (!g.has_vertex(anchor))
        throw PreconditionError("connector_tree: anchor is not a host vertex");
    for (int v : u)
        if (!g.has_vertex(v))
            throw PreconditionError("connector_tree: target vertex " + std::to_string(v) +
                                    " is not in the host");
    if (static_cast<int>(u.size()) < delta_cap)
        throw PreconditionError("connector_tree: |u| = " + std::to_string(u.size()) +
                                " cannot seat " + std::to_string(delta_cap) + " leaves");
    if (q <= Q(0)) throw PreconditionError("connector_tree: q must be positive");

    ConnectorTree result;
    result.leaf_targets = u;

    // Forward layer growth N^t until a layer reaches half of u.
    const Q q4 = pow_q(q, 4);
    const Q cap_q = Q(Int(19)) / q4;
    long long height_cap = g.order();
    if (cap_q < Q(Int(height_cap))) height_cap = std::max<long long>(1, ceil_ll(cap_q));

    std::vector<VertexSet> layers{{anchor}};
    const std::size_t needed = (u.size() + 1) / 2;
    int reach = -1;
    for (long long h = 1; h <= height_cap; ++h) {
        VertexSet next;
        for (int v : layers.back())
            for (int w : g.neighbors(v)) next.push_back(w);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layers.push_back(next);
        if (set_intersect(next, u).size() >= needed) {
            reach = static_cast<int>(h);
            break;
        }
    }
    if (reach < 0) {
        result.failure = "layer growth stalled before reaching half of the target set (cap " +
                         std::to_string(height_cap) + ")";
        return result;
    }

    // Backward filter: keep layer vertices with enough forward degree into the
    // filtered next layer (threshold q^4 |A_{k+1}| / 128, at least 1).
    std::vector<VertexSet> a(static_cast<std::size_t>(reach) + 1);
    a[static_cast<std::size_t>(reach)] = set_intersect(layers[static_cast<std::size_t>(reach)], u);
    for (int k = reach - 1; k >= 0; --k) {
        const VertexSet& next = a[static_cast<std::size_t>(k) + 1];
        const long long thresh =
            std::max<long long>(1, ceil_ll(q4 * Q(Int(next.size())) / Q(Int(128))));
        for (int v : layers[static_cast<std::size_t>(k)]) {
            long long fwd = 0;
            for (int w : g.neighbors(v)) fwd += set_contains(next, w);
            if (fwd >= thresh) a[static_cast<std::size_t>(k)].push_back(v);
        }
    }
    if (!set_contains(a[0], anchor)) {
        result.failure = "backward filter removed the anchor";
        return result;
    }

    // Level-by-level greedy embedding of the perfect delta_cap-ary tree.
    const RootedTree shape = RootedTree::perfect_tree(delta_cap, reach);
    std::vector<int> image(shape.ambient_n, -1);
    std::vector<char> used(g.ambient_n, 0);
    image[shape.root] = anchor;
    used[anchor] = 1;
    for (int v : shape.bfs_order()) {
        if (v == shape.root) continue;
        const std::size_t level = static_cast<std::size_t>(shape.depth(v));
        const int pimg = image[shape.parent[v]];
        int pick = -1;
        for (int w : g.neighbors(pimg))
            if (!used[w] && set_contains(a[level], w)) {
                pick = w;
                break;
            }
        if (pick < 0) {
            result.failure = "level " + std::to_string(level) + " starved at host vertex " +
                             std::to_string(pimg);
            return result;
        }
        image[v] = pick;
        used[pick] = 1;
    }

    result.tree = shape;
    result.height = reach;
    result.embedding = Embedding{shape, g, image};
    result.ok = validate_embedding(result.embedding, anchor, &result.failure);
    return result;
}

ExpanderResult expander_embed(const Graph& g, const RootedTree& t, int delta_cap) {
    if (t.max_degree() > delta_cap)
        throw PreconditionError("expander_embed: tree degree " + std::to_string(t.max_degree()) +
                                " exceeds delta_cap " + std::to_string(delta_cap));
    ExpanderResult result;
    if (t.order() > g.order()) {
        result.failure = "tree larger than host";
        return result;
    }

    const std::vector<int> order = t.bfs_order();
    const long long budget = 1'000'000;
    long long steps = 0;

    for (int anchor : g.verts) {
        std::vector<int> image(t.ambient_n, -1);
        std::vector<char> used(g.ambient_n, 0);
        std::vector<int> cursor(order.size(), 0);
        image[order[0]] = anchor;
        used[anchor] = 1;

        std::size_t pos = 1;
        bool out_of_budget = false;
        while (pos >= 1 && pos < order.size()) {
            if (++steps > budget) {
                out_of_budget = true;
                break;
            }
            const int v = order[pos];
            const auto& nbrs = g.neighbors(image[t.parent[v]]);
            int pick = -1;
            int& c = cursor[pos];
            while (c < static_cast<int>(nbrs.size())) {
                const int w = nbrs[c++];
                if (!used[w]) {
                    pick = w;
                    break;
                }
            }
            if (pick >= 0) {
                image[v] = pick;
                used[pick] = 1;
                ++pos;
                if (pos < order.size()) cursor[pos] = 0;
            } else {
                // Retreat: free the most recent placement and resume its scan.
                ++result.backtracks;
                cursor[pos] = 0;
                --pos;
                if (pos == 0) break;
                const int pv = order[pos];
                used[image[pv]] = 0;
                image[pv] = -1;
            }
        }
        if (pos == order.size()) {
            result.embedding = Embedding{t, g, image};
            result.failure.clear();
            return result;
        }
        result.failure = out_of_budget ? "search budget exhausted"
                                       : "every anchor exhausted without a full embedding";
        if (out_of_budget) break;
    }
    return result;
}

}  // namespace treestab
