#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treestab/graph.hpp"
#include "treestab/params.hpp"
#include "treestab/rational.hpp"

namespace treestab {

// A graph G is q-cut-dense when every bipartition V = A u B satisfies
// e(A,B) >= q|A||B|. This header covers certification (exact and flow-based
// lower bounds), the preservation bounds, decomposition into cut-dense
// components, and the randomized dense-core search.

enum class CertKind { Exact, FlowLowerBound, ViolatingCut };

struct CutCertificate {
    CertKind kind = CertKind::Exact;
    Q q_value = Q(0);
    // Side A of the worst (Exact) or violating (ViolatingCut) cut; labels are
    // ambient vertex ids. Empty for FlowLowerBound.
    std::optional<VertexSet> witness;
    // Flow certificates for |g| < 10 carry no guarantee from the lemma.
    bool flagged_small_n = false;
    // Set when a non-exhaustive violating-cut search vouched for density.
    bool heuristic_complete = false;
};

struct PathProfile {
    // Minimum over ordered pairs u != v of the max number of edge-disjoint
    // length >= 1 paths from N(u) to N(v).
    long long min_pairs = 0;
    // Same minimum over the diagonal pairs u == v, reported separately; it
    // does not enter q_value (the K_4 reference value pins distinct pairs).
    long long min_pairs_diagonal = 0;
    // Row-major n x n table of per-pair path counts (-1 where undefined).
    std::vector<long long> table;
    int n = 0;

    long long pair_count(int u, int v) const {
        return table[static_cast<std::size_t>(u) * n + v];
    }
};

// Enumerates all 2^(n-1) bipartitions. Throws PreconditionError for |g| < 2
// and BudgetExceeded when |g| > max_n (callers fall back to flow_certify).
CutCertificate exact_cut_density(const Graph& g, int max_n = 22);

// Max-flow certification: q_value = min_pairs / (10 n^2), a sound lower
// bound on the cut-density for |g| >= 10 (flagged below that).
struct FlowCertifyResult {
    PathProfile profile;
    CutCertificate certificate;
};
FlowCertifyResult flow_certify(const Graph& g);

// Max number of edge-disjoint length >= 1 walks from `sources` to `sinks`
// (vertex sets of g, may intersect), computed as the flow value of an
// edge-gadget network. Caveat: a vertex lying in both sets can satisfy the
// length requirement with a degenerate out-and-back over one incident edge,
// so for intersecting sets the count may slightly exceed the number of
// simple such paths. Exposed for testing.
long long edge_disjoint_path_count(const Graph& g, const VertexSet& sources,
                                   const VertexSet& sinks);

// Preservation bounds. Each returns a density guaranteed for the derived
// graph, assuming the stated hypothesis about the inputs.

// g1, g2 both q-cut-dense -> union is q|V1 n V2| / (4|V1 u V2|)-cut-dense.
Q union_bound(const Q& q, const Graph& g1, const Graph& g2);

// g q-cut-dense inside h, every outside vertex with >= delta|g| neighbors in
// g -> h is (q delta |g|^2 / 4|h|^2)-cut-dense. Throws PreconditionError when
// the neighbor quota fails.
Q attach_bound(const Q& q, const Graph& g, const Graph& h, const Q& delta);

// g q-cut-dense, |u| <= q|g|/8 -> g minus u is q/2-cut-dense.
Q delete_set_bound(const Q& q, const Graph& g, const VertexSet& u);

struct DecomposeResult {
    EdgeSet deleted;
    std::vector<Graph> components;
    // False when some component relied on the local search (order > exact
    // budget) and a violating cut may have been missed.
    bool heuristic_complete_all = true;
};

// Repeatedly deletes violating cuts until every component is q-cut-dense;
// total deletions bounded by q n^2.
DecomposeResult decompose(const Graph& g, const Q& q, std::uint64_t seed,
                          const Budgets& budgets = {});

// Searches one component for a cut with e(A,B) < q|A||B|. Exhaustive up to
// budgets.exact_cut_max_n, otherwise seeded local search; nullopt = none found.
std::optional<VertexSet> find_violating_cut(const Graph& g, const Q& q,
                                            std::uint64_t seed, const Budgets& budgets);

struct CoreSearchResult {
    std::optional<Graph> core;       // order ceil(mu |g|) on success
    CutCertificate certificate;      // certifies q-cut-density of the core
    std::vector<std::string> diagnostics;  // one line per failed retry
};

// Randomized dense-core construction: sample at rate (p+q)/2 (capped at 1),
// decompose at that scale, keep the largest surviving component, sample a
// core inside it and pad to ceil(mu |g|), then certify at q.
// Precondition: e(g) >= p |g|^2.
CoreSearchResult find_cut_dense_subgraph(const Graph& g, const Q& p, const Q& q,
                                         const Q& mu, std::uint64_t seed,
                                         int retries = 16,
                                         const Budgets& budgets = {});

struct ExpansionReport {
    bool pass = true;
    bool exhaustive = true;          // false when only sampled sets were checked
    std::optional<VertexSet> witness;  // violating S when pass == false
};

// Verifies |N(S) \ S| >= factor |S| for all S with |S| <= max_size.
ExpansionReport expansion_check(const Graph& g, const Q& factor, int max_size,
                                std::uint64_t seed = 0,
                                const Budgets& budgets = {});

struct PreservationTrial {
    VertexSet sample;                // the p-random S
    Q empirical_min = Q(0);          // min density over sampled supersets
    Q analytic_bound = Q(0);            // p^(q^-4) q^5, clamped
    bool bound_below_floor = false;
    int supersets_checked = 0;
};

// Statistical check of the sampling lemma; never used as a certifier.
PreservationTrial sample_preservation_trial(const Graph& g, const Q& q, const Q& p,
                                            std::uint64_t seed,
                                            const Budgets& budgets = {});

}  // namespace treestab
