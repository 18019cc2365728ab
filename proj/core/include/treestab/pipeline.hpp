#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treestab/clump.hpp"
#include "treestab/graph.hpp"
#include "treestab/params.hpp"
#include "treestab/tree.hpp"
#include "treestab/tree_embed.hpp"

namespace treestab {

struct CoveredComponent {
    Graph component;
    VertexSet cover;
};

struct DeletionAccounting {
    long long sparse_edges = 0;    // remainder after cut-dense extraction
    long long non_b_edges = 0;     // union of K_i minus B(K_i)
    long long overlap_edges = 0;   // edges touching later-D overlaps
};

struct DeletionCertificate {
    EdgeSet deleted_edges;
    std::vector<CoveredComponent> components;
    DeletionAccounting accounting;
    ParamHierarchy params_used;
    std::vector<std::string> caveats;
};

struct StageEntry {
    std::string stage;
    std::string action;
    std::string counts;
    std::string caveats;
};

enum class Outcome { EmbeddingFound, Certificate, Inconclusive };

struct StructureResult {
    Outcome outcome = Outcome::Inconclusive;
    std::optional<Embedding> embedding;
    std::optional<DeletionCertificate> certificate;
    std::vector<StageEntry> stage_log;
    std::string inconclusive_reason;
};

// The full procedure: (a) dense shortcut via peel + greedy embed, (b) greedy
// extraction of edge-disjoint order-m p-cut-dense subgraphs, (c) expander
// route on a heavy sparse remainder, (d) clump joining loop with the |M|
// guard, (e) overlap-fan trigger, (f) ordering / subdivision trigger,
// (g) certificate emission. Every embedding exit is validated before return;
// Inconclusive only when no exit lands.
StructureResult hyperstability(const Graph& g, const RootedTree& t,
                               ParamHierarchy params);

// From-scratch certificate audit: deletion subset, component disjointness,
// cover property, bound reports, optional exact T-freeness of small
// components.
struct CertificateAudit {
    bool pass = false;
    std::vector<std::string> reasons;       // failures
    std::vector<std::string> warnings;      // e.g. a component still contains t
    long long deleted_vs_target = 0;        // |deleted| - ceil(eps d n)
    long long max_cover = 0;
    Q cover_target = Q(0);                  // (2+eps) d
};
CertificateAudit validate_certificate(const Graph& g, const RootedTree& t,
                                      const DeletionCertificate& cert,
                                      bool check_t_freeness = false);

}  // namespace treestab
