#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"
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

// Greedy BFS embedding that prefers candidate hosts with the highest rank
// (ties: lowest index). Rank encodes how deep in the piece tree a host vertex
// sits, so components drift across connectors instead of crowding the root
// piece.
std::optional<Embedding> ranked_greedy(const Graph& host, const RootedTree& comp, int anchor,
                                       const std::vector<int>& rank, std::string* fail) {
    Embedding emb;
    emb.tree = comp;
    emb.host = host;
    emb.image.assign(static_cast<std::size_t>(comp.ambient_n), -1);
    std::vector<char> used(static_cast<std::size_t>(host.ambient_n), 0);
    emb.image[comp.root] = anchor;
    used[anchor] = 1;
    for (int v : comp.bfs_order()) {
        if (v == comp.root) continue;
        const int img_p = emb.image[comp.parent[v]];
        int pick = -1, pick_rank = -1;
        for (int w : host.neighbors(img_p)) {
            if (used[w]) continue;
            if (rank[w] > pick_rank) {
                pick = w;
                pick_rank = rank[w];
            }
        }
        if (pick < 0) {
            if (fail)
                *fail = "starved at tree vertex " + std::to_string(v) + " (host vertex " +
                        std::to_string(img_p) + " has no free neighbour)";
            return std::nullopt;
        }
        emb.image[v] = pick;
        used[pick] = 1;
    }
    return emb;
}

}  // namespace

StagedEmbedResult embed_tree_of_pieces(const std::vector<Graph>& pieces,
                                       const RootedTree& s_tree,
                                       const std::map<std::pair<int, int>, int>& connectors,
                                       const RootedTree& t, const ParamHierarchy& params) {
    const int np = static_cast<int>(pieces.size());
    if (np == 0) throw PreconditionError("embed_tree_of_pieces: no pieces");
    if (t.order() == 0) throw PreconditionError("embed_tree_of_pieces: empty tree");
    if (s_tree.order() != np)
        throw ValidationError("embed_tree_of_pieces: s_tree order " +
                              std::to_string(s_tree.order()) + " != piece count " +
                              std::to_string(np));
    for (int v : s_tree.verts)
        if (v < 0 || v >= np)
            throw ValidationError("embed_tree_of_pieces: s_tree vertex " + std::to_string(v) +
                                  " is not a piece index");
    const int cap = tree_max_degree(t);
    if (cap > params.delta_cap)
        throw PreconditionError("embed_tree_of_pieces: tree degree " + std::to_string(cap) +
                                " exceeds delta_cap " + std::to_string(params.delta_cap));

    // Structure validation: adjacent pieces share exactly their connector,
    // everything else is disjoint.
    for (int c : s_tree.verts) {
        if (c == s_tree.root) continue;
        const int p = s_tree.parent[c];
        auto it = connectors.find({p, c});
        if (it == connectors.end())
            throw ValidationError("embed_tree_of_pieces: no connector for s_tree edge (" +
                                  std::to_string(p) + "," + std::to_string(c) + ")");
        const int w = it->second;
        if (!pieces[p].has_vertex(w) || !pieces[c].has_vertex(w))
            throw ValidationError("embed_tree_of_pieces: connector " + std::to_string(w) +
                                  " missing from piece " + std::to_string(p) + " or " +
                                  std::to_string(c));
        VertexSet shared = set_intersect(pieces[p].verts, pieces[c].verts);
        if (shared != VertexSet{w})
            throw ValidationError("embed_tree_of_pieces: pieces " + std::to_string(p) + " and " +
                                  std::to_string(c) + " share " + std::to_string(shared.size()) +
                                  " vertices; expected exactly the connector");
    }
    for (int i = 0; i < np; ++i)
        for (int j = i + 1; j < np; ++j) {
            const bool adjacent = (s_tree.parent[j] == i) || (s_tree.parent[i] == j);
            if (adjacent) continue;
            if (!set_intersect(pieces[i].verts, pieces[j].verts).empty())
                throw ValidationError("embed_tree_of_pieces: non-adjacent pieces " +
                                      std::to_string(i) + " and " + std::to_string(j) +
                                      " overlap");
        }

    StagedEmbedResult out;
    auto log = [&out](const std::string& stage, const std::string& msg) {
        out.stage_log.push_back(stage + ": " + msg);
    };
    const int retries = std::max(1, params.budgets.retries);
    const int k = s_tree.height() + 1;

    // Density survey (advisory at this scale): certify each piece exactly
    // when small, by flow otherwise; record the weakest value.
    {
        Q weakest(1);
        bool any_zero = false;
        for (const Graph& piece : pieces) {
            Q qi(0);
            if (piece.order() >= 2) {
                if (piece.order() <= params.budgets.exact_cut_max_n)
                    qi = exact_cut_density(piece, params.budgets.exact_cut_max_n).q_value;
                else
                    qi = flow_certify(piece).certificate.q_value;
            }
            weakest = std::min(weakest, qi);
            any_zero = any_zero || (qi == Q(0) && piece.order() >= 2);
        }
        log("density", "weakest piece density " + to_string(weakest) +
                           (any_zero ? " (a piece is disconnected)" : ""));
        long long n_min = pieces[0].order();
        for (const Graph& piece : pieces) n_min = std::min(n_min, (long long)piece.order());
        const Q size_bound = Q(Int(k)) * weakest * Q(Int(n_min)) / Q(16);
        if (Q(Int(t.order())) > size_bound)
            log("density", "size hypothesis |t| <= k q n / 16 fails at this scale (|t| = " +
                               std::to_string(t.order()) + ", bound = " + to_string(size_bound) +
                               ")");
    }

    // Head: split at lambda = 1 - 1/k and embed the root part into the root
    // piece, avoiding its child connectors.
    const Q lambda = (k == 1) ? Q(0) : Q(Int(k - 1), Int(k));
    SplitResult split = split_tree(t, lambda, params.delta_cap);
    const int rp = s_tree.root;
    VertexSet avoid;
    for (int c : s_tree.children[rp]) avoid.push_back(connectors.at({rp, c}));
    std::sort(avoid.begin(), avoid.end());
    avoid.erase(std::unique(avoid.begin(), avoid.end()), avoid.end());
    Graph head_host = pieces[rp].without_vertices(avoid);

    std::optional<Embedding> head;
    {
        int tried = 0;
        for (int a : head_host.verts) {
            if (head_host.degree(a) < cap) continue;
            if (tried >= retries) break;
            ++tried;
            GreedyResult got = greedy_embed(head_host, split.q_subtree, a);
            if (got.embedding) {
                head = std::move(got.embedding);
                log("head", "root part (" + std::to_string(split.q_subtree.order()) +
                                " vertices) embedded in piece " + std::to_string(rp) +
                                " from anchor " + std::to_string(a));
                break;
            }
        }
        if (!head) {
            for (int a : head_host.verts) {  // relax the degree filter
                GreedyResult got = greedy_embed(head_host, split.q_subtree, a);
                if (got.embedding) {
                    head = std::move(got.embedding);
                    log("head", "root part embedded from low-degree anchor " + std::to_string(a));
                    break;
                }
            }
        }
    }
    if (!head) {
        out.stage_failed = "greedy-completion";
        log("greedy-completion", "root part of order " +
                                     std::to_string(split.q_subtree.order()) +
                                     " found no anchor in piece " + std::to_string(rp));
        return out;
    }

    // Rank host vertices by the deepest piece containing them; components
    // prefer high rank, which routes them through connectors into branches.
    Graph whole = pieces[0];
    for (int i = 1; i < np; ++i) whole = whole.union_with(pieces[i]);
    std::vector<int> rank(static_cast<std::size_t>(whole.ambient_n), 0);
    for (int i = 0; i < np; ++i) {
        const int depth = s_tree.depth(i);
        for (int v : pieces[i].verts) rank[v] = std::max(rank[v], depth);
    }

    std::vector<char> used(static_cast<std::size_t>(whole.ambient_n), 0);
    for (int v : split.q_subtree.verts) used[head->at(v)] = 1;

    const std::vector<int>& kids = s_tree.children[rp];
    std::vector<Embedding> parts;
    for (std::size_t i = 0; i < split.components.size(); ++i) {
        const RootedTree& comp = split.components[i];
        const int y = split.externals[i];
        const int img_p = head->at(t.parent[y]);

        // Component host: root piece plus the branch assigned round-robin.
        VertexSet host_verts = pieces[rp].verts;
        if (!kids.empty()) {
            const int child = kids[i % kids.size()];
            for (int b : s_tree.subtree_vertices(child))
                host_verts = set_union(host_verts, pieces[b].verts);
        }
        VertexSet free_verts;
        for (int v : host_verts)
            if (!used[v]) free_verts.push_back(v);
        Graph host = whole.induced(set_union(free_verts, VertexSet{img_p}));

        std::vector<int> candidates;  // free neighbours, deepest rank first
        for (int w : host.neighbors(img_p))
            if (!used[w]) candidates.push_back(w);
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&rank](int a, int b) { return rank[a] > rank[b]; });
        if (candidates.empty()) {
            out.stage_failed = "connector";
            log("connector", "component " + std::to_string(i) + ": attachment image " +
                                 std::to_string(img_p) + " has no free neighbour in its branch");
            return out;
        }

        bool placed = false;
        int attempts = 0;
        for (int a : candidates) {
            if (attempts >= retries) break;
            ++attempts;
            Graph comp_host = whole.induced(free_verts);
            std::string fail;
            std::optional<Embedding> got = ranked_greedy(comp_host, comp, a, rank, &fail);
            if (got) {
                for (int v : comp.verts) used[got->at(v)] = 1;
                parts.push_back(std::move(*got));
                placed = true;
                log("component", std::to_string(i) + " (" + std::to_string(comp.order()) +
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
    base.host = whole;
    base.image = head->image;
    Embedding merged = combine_embeddings(base, parts);
    log("combine", "all " + std::to_string(t.order()) + " tree vertices placed and verified");
    out.embedding = std::move(merged);
    return out;
}

}  // namespace treestab
