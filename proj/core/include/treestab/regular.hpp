#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treestab/graph.hpp"

namespace treestab {

enum class RegularSearchFlag { FoundWithinBudget, ExhaustedProvenAbsent, BudgetExceeded };

struct RegularSearchResult {
    std::optional<Graph> subgraph;  // r-regular when present
    RegularSearchFlag flag = RegularSearchFlag::ExhaustedProvenAbsent;
    long long nodes_used = 0;
};

// Backtracking search for an r-regular subgraph: trim to the r-core, then
// branch on edge subsets with degree bounds, most-constrained vertex first.
// budget counts search-tree nodes.
RegularSearchResult find_regular_subgraph(const Graph& g, int r,
                                          long long budget = 1'000'000);

enum class MaximalFlag { ProvenMaximal, MaximalUnderBudget };

struct RegularFamily {
    std::vector<Graph> members;       // pairwise vertex-disjoint, each r-regular
    std::vector<int> host_index;      // member i lives inside hosts[host_index[i]]
    int r = 1;
    MaximalFlag maximal_flag = MaximalFlag::ProvenMaximal;

    VertexSet vertices() const;       // union of member vertex sets
    long long size() const { return static_cast<long long>(members.size()); }
};

// Greedy family construction: hosts in descending density order, repeated
// find_regular_subgraph on each host minus already-used vertices. Flag is
// ProvenMaximal only when every residual search exhausted.
// Precondition: hosts pairwise edge-disjoint.
RegularFamily max_disjoint_regular_family(const std::vector<Graph>& hosts, int r,
                                          long long budget = 1'000'000);

}  // namespace treestab
