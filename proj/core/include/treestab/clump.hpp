#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treestab/cutdense.hpp"
#include "treestab/graph.hpp"
#include "treestab/params.hpp"
#include "treestab/regular.hpp"
#include "treestab/tree.hpp"
#include "treestab/tree_embed.hpp"

namespace treestab {

// Caveats accumulated while building a clump; serialized with certificates.
struct ClumpFlags {
    bool regular_budget_limited = false;  // some m_family was maximal-under-budget
    bool core_bound_below_floor = false;  // kappa^{(10k)!} clamped to q_min
    bool core_cert_heuristic = false;     // core density vouched non-exhaustively
};

// A clump: an edge-partition into order-m p-cut-dense hosts (H), a maximal
// vertex-disjoint family of r-regular subgraphs inside them (M), and a
// cut-dense core containing all of M (C).
struct Clump {
    Graph graph;                   // union of h_family
    std::vector<Graph> h_family;   // edge-disjoint, each order m, p-cut-dense
    RegularFamily m_family;        // members each inside one h_family entry
    Graph c_core;
    int k = 0;                     // m_family size
    GuaranteeBound core_bound;     // claimed density of c_core
    ClumpFlags flags;

    VertexSet m_vertices() const { return m_family.vertices(); }
};

struct DerivedSets {
    VertexSet m_union;  // V(M(K))
    Graph b_graph;      // B(K): E(M) plus edges u in M to outsiders with big M-degree
    Graph d_graph;      // D(K) = C(K) union B(K)
};

// The regular degree the clumps use: max(1, floor(p^13 m)).
int clump_regular_degree(const ParamHierarchy& params);

// Wraps a certified p-cut-dense order-m graph into a single-host clump.
// Throws PreconditionError when h has the wrong order or fails the density
// check at p (exact when small, flow otherwise).
Clump init_clump(const Graph& h, const ParamHierarchy& params,
                 const CutCertificate* precomputed = nullptr);

// B(K)/D(K) per the definitions; outsider threshold p*m/2 in exact rationals.
// `ambient` must contain k.graph; the outsider rule itself only consults
// edges of K, so ambient acts as a containment check.
DerivedSets derive_sets(const Clump& k, const Graph& ambient,
                        const ParamHierarchy& params);

// Joins two edge-disjoint clumps whose D-sets overlap in at least
// overlap_threshold(params, max k) vertices. Growth branch rebuilds the core
// as C1 u C2 u I u (all hosts); no-growth branch reuses the larger clump's
// m_family and core.
Clump join_clumps(const Clump& k1, const Clump& k2, const ParamHierarchy& params,
                  const Graph& ambient);

// kappa^{6 (10 max_k)!} * m, clamped to at least 1 vertex.
long long join_overlap_threshold(const ParamHierarchy& params, int max_k);

// Core density bound kappa^{(10k)!} with clamping metadata.
GuaranteeBound core_density_bound(const ParamHierarchy& params, int k);

// Union I_1 u H_1 u C(K_1) u ... with the guaranteed density
// kappa^{(10k)!} mu^{2kt^2} (clamped). i_sets[i] must lie in D(K_1) n D(K_i)
// with exactly mu*m vertices; h_choices[i] is an element of H(K_i) or nullopt.
struct ClumpUnionResult {
    Graph graph;
    GuaranteeBound guaranteed_q;
};
ClumpUnionResult clump_cut_dense_subgraph(const std::vector<Clump>& clumps,
                                          const std::vector<VertexSet>& i_sets,
                                          const std::vector<std::optional<Graph>>& h_choices,
                                          const ParamHierarchy& params);

enum class ClumpTrigger { LargeM, ManyOverlaps, SubdivisionTree };

// Payload for the three embedding triggers. LargeM: index of the clump with
// |M| >= (2+eps)d. ManyOverlaps: center index plus the overlapping clump
// indices and chosen i_sets. SubdivisionTree: s_tree over clump indices with
// connector vertices on its edges.
struct TriggerPayload {
    int center = -1;
    std::vector<int> members;
    std::vector<VertexSet> i_sets;
    RootedTree s_tree;
    std::map<std::pair<int, int>, int> connectors;
};

StagedEmbedResult clump_embed_trigger(const std::vector<Clump>& clumps,
                                      ClumpTrigger trigger, const TriggerPayload& payload,
                                      const RootedTree& t, const ParamHierarchy& params);

}  // namespace treestab
