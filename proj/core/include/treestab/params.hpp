#pragma once

#include <cstdint>
#include <string>

#include "treestab/rational.hpp"

namespace treestab {

// Search/enumeration budgets shared across modules.
struct Budgets {
    // exact_cut_density enumerates all 2^(n-1) bipartitions up to this order.
    int exact_cut_max_n = 22;
    // Node budget for backtracking searches (regular subgraphs, covers, ...).
    long long search_nodes = 1'000'000;
    // Sampling retries for randomized subroutines.
    int retries = 16;
};

// Parameter hierarchy for the full pipeline. Defaults are desk-scale values
// chosen so the bundled examples exercise every stage; the CLI can override
// each knob. The hierarchy check (eps < ... and each constant small enough
// relative to the previous layer) is advisory at this scale and enforced only
// under --strict-hierarchy.
struct ParamHierarchy {
    Q epsilon = Q(1, 2);   // slack in the cover bound (2+eps)d
    int delta_cap = 5;     // max degree Delta of admissible trees
    Q p = Q(1, 4);         // cut-density scale for extraction
    int h = 2;             // order divisor: m = ceil(d/h)
    Q alpha = Q(1, 8);     // core sampling rate scale
    Q kappa = Q(1, 16);    // clump core density scale
    int L = 2;             // subdivision pattern arity/depth
    Q gamma = Q(1, 32);    // overlap fraction threshold
    Q mu = Q(1, 4);        // target core fraction in cut-dense search

    std::uint64_t seed = 0;
    Budgets budgets;

    // Derived (set by finalize):
    long long d = 0;       // |T|, the tree order driving the instance
    long long m = 0;       // ceil(d/h)
    Q big_c = Q(5, 2);     // C = 2 + eps

    void finalize(long long tree_order);
    // Returns a complaint ("" when fine) about hierarchy violations.
    std::string hierarchy_complaint() const;
};

}  // namespace treestab
