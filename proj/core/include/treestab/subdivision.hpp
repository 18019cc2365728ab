#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treestab/graph.hpp"
#include "treestab/tree.hpp"

namespace treestab {

// A 1-subdivision of `pattern` inside a bipartite host: branch vertices in
// side B, one middle vertex in side A per pattern edge, all images distinct.
struct SubdivisionWitness {
    RootedTree pattern;
    std::vector<int> branch_map;                    // pattern-vertex -> B vertex (-1 unused)
    std::map<std::pair<int, int>, int> middle_map;  // pattern edge (parent-order) -> A vertex
};

struct SubdivisionResult {
    std::optional<SubdivisionWitness> witness;
    std::string failure;
    // Measured common-neighborhood profile: B-pairs meeting each threshold.
    long long pairs_at_t_thresh = 0;
    long long pairs_at_s_thresh = 0;
};

// Finds a 1-subdivision with subdivided vertices in side_a. Follows the
// two-branch construction: heavy-degree half (peel A_large side to 2k and
// embed directly) or random 2-edge pruning of A_small, contraction to a
// simple graph on B, peel toward min degree k (falling back to the densest
// core when the strict peel empties), greedy pattern embed, uncontract.
SubdivisionResult find_1_subdivision(const Graph& bip, const VertexSet& side_a,
                                     const VertexSet& side_b, const RootedTree& pattern,
                                     long long t_thresh, long long s_thresh,
                                     std::uint64_t seed, int retries = 16);

// Independent witness checker (distinctness + the two host adjacencies per
// pattern edge + sides respected).
bool validate_subdivision(const Graph& bip, const VertexSet& side_a,
                          const VertexSet& side_b, const SubdivisionWitness& w,
                          std::string* why = nullptr);

}  // namespace treestab
