#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treestab/graph.hpp"
#include "treestab/params.hpp"
#include "treestab/tree.hpp"

namespace treestab {

struct Embedding {
    RootedTree tree;
    Graph host;
    // Ambient-tree-indexed: image[v] = host vertex, -1 for unmapped labels.
    std::vector<int> image;

    int at(int tree_v) const { return image[tree_v]; }
    bool maps(int tree_v) const { return image[tree_v] >= 0; }
};

// Independent validity check: injectivity over t.verts, every tree edge to a
// host edge, optional anchor. Kept free of any constructor logic on purpose.
bool validate_embedding(const Embedding& emb, std::optional<int> anchor = std::nullopt,
                        std::string* why = nullptr);

// Greedy root-anchored embedding in BFS order, lowest-index free neighbor
// first. The guarantee needs delta(g minus anchor) >= e(t) and
// deg(anchor) >= Delta(t); `guaranteed` reports whether that held. The
// attempt itself runs regardless and may still succeed below the bound.
struct GreedyResult {
    std::optional<Embedding> embedding;
    bool guaranteed = false;
    std::string failure;  // first starved tree vertex when embedding is absent
};
GreedyResult greedy_embed(const Graph& g, const RootedTree& t, int anchor);

struct SplitResult {
    RootedTree q_subtree;                 // contains the root
    std::vector<RootedTree> components;   // of t minus Q, original labels
    std::vector<int> externals;           // externals[i] in components[i] and in Q's boundary
};

// Splits t into a root subtree Q with |Q| in [(1-2lambda)n, (1-lambda)n+2Delta]
// and at most Delta components each of order <= lambda*n.
SplitResult split_tree(const RootedTree& t, const Q& lambda, int delta_cap);

// The bijection between components of t minus sub and their unique external
// vertices (the component vertex adjacent to sub).
std::vector<std::pair<int, RootedTree>> external_vertices(const RootedTree& t,
                                                          const RootedTree& sub);

// Merges piece embeddings that agree with `base` on shared external vertices;
// throws ValidationError naming the first offending pair of parts on overlap.
Embedding combine_embeddings(const Embedding& base, const std::vector<Embedding>& parts);

struct ConnectorTree {
    RootedTree tree;       // perfect delta_cap-ary
    int height = 0;
    VertexSet leaf_targets;
    Embedding embedding;
    bool ok = false;
    std::string failure;
};

// Grows neighborhood layers N^t from the anchor until a layer dominates u
// (threshold q^4 n / 16 growth, backward filter q^4|A|/128), then embeds a
// perfect delta_cap-ary tree level by level with all leaves inside u.
ConnectorTree connector_tree(const Graph& g, int anchor, const VertexSet& u,
                             int delta_cap, const Q& q);

// Friedman-Pippenger style embedding: greedy growth with backtracking of the
// most recent removable leaf when a boundary starves.
struct ExpanderResult {
    std::optional<Embedding> embedding;
    std::string failure;
    long long backtracks = 0;
};
ExpanderResult expander_embed(const Graph& g, const RootedTree& t, int delta_cap);

// Embedding into a dense regular subgraph (the first half of the embedding
// lemma): needs |r_sub| >= (2+2 eps)|t|. Tries the direct greedy base case
// first, then the full induction with reservoir sets and connector trees.
struct StagedEmbedResult {
    std::optional<Embedding> embedding;
    std::string stage_failed;  // "", "reservoirs", "connector", "greedy-completion"
    std::vector<std::string> stage_log;
};
StagedEmbedResult embed_cut_dense(const Graph& g, const Graph& r_sub, const RootedTree& t,
                                  const ParamHierarchy& params, std::uint64_t seed);

// Embedding into a tree of cut-dense pieces glued along single connector
// vertices. s_tree is a rooted tree over piece indices; connectors maps each
// s_tree edge (parent,child) to the shared host vertex.
StagedEmbedResult embed_tree_of_pieces(const std::vector<Graph>& pieces,
                                       const RootedTree& s_tree,
                                       const std::map<std::pair<int, int>, int>& connectors,
                                       const RootedTree& t, const ParamHierarchy& params);

}  // namespace treestab
