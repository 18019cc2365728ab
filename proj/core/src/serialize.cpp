#include "treestab/serialize.hpp"

#include <string>
#include <vector>

#include "json.hpp"

namespace treestab {

namespace {

using json = nlohmann::ordered_json;

// Exact rationals ride as decimal strings so no reader is tempted to round.
json j_q(const Q& q) {
    return json{{"num", q.numerator().str()}, {"den", q.denominator().str()}};
}

json j_edges(const EdgeSet& edges) {
    json arr = json::array();
    for (const Edge& e : edges) arr.push_back(json::array({e.first, e.second}));
    return arr;
}

json j_graph(const Graph& g) {
    return json{{"ambient_n", g.ambient_n}, {"verts", g.verts}, {"edges", j_edges(g.edges)}};
}

json j_tree(const RootedTree& t) {
    json parents = json::array();
    for (int v : t.verts) parents.push_back(json::array({v, t.parent[v]}));
    return json{{"ambient_n", t.ambient_n}, {"root", t.root}, {"parents", parents}};
}

json j_image(const Embedding& emb) {
    json arr = json::array();
    for (int v : emb.tree.verts) arr.push_back(json::array({v, emb.image[v]}));
    return arr;
}

json j_bound(const GuaranteeBound& b) {
    return json{{"value", j_q(b.value)},
                {"below_floor", b.below_floor},
                {"dyadic_rounded", b.dyadic_rounded},
                {"formula", b.formula}};
}

const char* cert_kind_name(CertKind k) {
    switch (k) {
        case CertKind::Exact: return "exact";
        case CertKind::FlowLowerBound: return "flow-lower-bound";
        case CertKind::ViolatingCut: return "violating-cut";
    }
    return "unknown";
}

json j_certificate(const CutCertificate& cert, const std::string& pair_table_path) {
    json j{{"kind", cert_kind_name(cert.kind)}, {"q", j_q(cert.q_value)}};
    j["witness"] = cert.witness ? json(*cert.witness) : json(nullptr);
    j["flagged_small_n"] = cert.flagged_small_n;
    j["heuristic_complete"] = cert.heuristic_complete;
    if (!pair_table_path.empty()) j["pair_table"] = pair_table_path;
    return j;
}

json j_params(const ParamHierarchy& p) {
    return json{{"epsilon", j_q(p.epsilon)},
                {"delta_cap", p.delta_cap},
                {"p", j_q(p.p)},
                {"h", p.h},
                {"alpha", j_q(p.alpha)},
                {"kappa", j_q(p.kappa)},
                {"L", p.L},
                {"gamma", j_q(p.gamma)},
                {"mu", j_q(p.mu)},
                {"seed", std::to_string(p.seed)},
                {"d", p.d},
                {"m", p.m},
                {"big_c", j_q(p.big_c)}};
}

json j_deletion_certificate(const DeletionCertificate& cert) {
    json comps = json::array();
    for (const CoveredComponent& cc : cert.components)
        comps.push_back(json{{"component", j_graph(cc.component)}, {"cover", cc.cover}});
    return json{{"deleted", j_edges(cert.deleted_edges)},
                {"components", comps},
                {"accounting",
                 json{{"sparse_edges", cert.accounting.sparse_edges},
                      {"non_b_edges", cert.accounting.non_b_edges},
                      {"overlap_edges", cert.accounting.overlap_edges}}},
                {"params", j_params(cert.params_used)},
                {"caveats", cert.caveats}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string certificate_json(const CutCertificate& cert, const std::string& pair_table_path) {
    return dump(j_certificate(cert, pair_table_path));
}

std::string path_profile_json(const PathProfile& profile) {
    json table = json::array();
    for (int u = 0; u < profile.n; ++u) {
        json row = json::array();
        for (int v = 0; v < profile.n; ++v) row.push_back(profile.pair_count(u, v));
        table.push_back(row);
    }
    return dump(json{{"n", profile.n},
                     {"min_pairs", profile.min_pairs},
                     {"min_pairs_diagonal", profile.min_pairs_diagonal},
                     {"table", table}});
}

std::string embedding_json(const Embedding& emb, const std::string& tree_file,
                           const std::string& host_file, bool validated) {
    return dump(json{{"tree", tree_file},
                     {"host", host_file},
                     {"validated", validated},
                     {"image", j_image(emb)}});
}

std::string decompose_json(const DecomposeResult& result) {
    json comps = json::array();
    for (const Graph& c : result.components) comps.push_back(j_graph(c));
    return dump(json{{"deleted", j_edges(result.deleted)},
                     {"components", comps},
                     {"heuristic_complete_all", result.heuristic_complete_all}});
}

std::string clump_json(const Clump& clump) {
    json hosts = json::array();
    for (const Graph& h : clump.h_family) hosts.push_back(j_graph(h));
    json members = json::array();
    for (const Graph& m : clump.m_family.members) members.push_back(j_graph(m));
    return dump(json{
        {"k", clump.k},
        {"graph", j_graph(clump.graph)},
        {"h_family", hosts},
        {"m_family",
         json{{"r", clump.m_family.r},
              {"members", members},
              {"host_index", clump.m_family.host_index},
              {"maximal", clump.m_family.maximal_flag == MaximalFlag::ProvenMaximal
                              ? "proven"
                              : "under-budget"}}},
        {"c_core", j_graph(clump.c_core)},
        {"core_bound", j_bound(clump.core_bound)},
        {"flags",
         json{{"regular_budget_limited", clump.flags.regular_budget_limited},
              {"core_bound_below_floor", clump.flags.core_bound_below_floor},
              {"core_cert_heuristic", clump.flags.core_cert_heuristic}}}});
}

std::string subdivision_json(const SubdivisionWitness& w, const std::string& pattern_file) {
    json branches = json::array();
    for (int v : w.pattern.verts) branches.push_back(json::array({v, w.branch_map[v]}));
    json middles = json::array();
    for (const auto& kv : w.middle_map)
        middles.push_back(json{{"edge", json::array({kv.first.first, kv.first.second})},
                               {"vertex", kv.second}});
    return dump(json{{"pattern", pattern_file},
                     {"pattern_tree", j_tree(w.pattern)},
                     {"branch_map", branches},
                     {"middles", middles}});
}

std::string result_json(const StructureResult& result, const std::string& tree_file,
                        const std::string& host_file) {
    const char* outcome = result.outcome == Outcome::EmbeddingFound ? "embedding-found"
                          : result.outcome == Outcome::Certificate  ? "certificate"
                                                                    : "inconclusive";
    json j{{"outcome", outcome}, {"tree", tree_file}, {"host", host_file}};
    if (result.embedding) j["embedding"] = j_image(*result.embedding);
    if (result.certificate) j["certificate"] = j_deletion_certificate(*result.certificate);
    if (!result.inconclusive_reason.empty())
        j["inconclusive_reason"] = result.inconclusive_reason;
    json stages = json::array();
    for (const StageEntry& s : result.stage_log)
        stages.push_back(json{{"stage", s.stage},
                              {"action", s.action},
                              {"counts", s.counts},
                              {"caveats", s.caveats}});
    j["stage_log"] = stages;
    return dump(j);
}

std::string scan_report_json(const oracle::ScanReport& report) {
    json counter = json::array();
    for (const auto& [g, t] : report.counterexamples)
        counter.push_back(json{{"graph", j_graph(g)}, {"tree", j_tree(t)}});
    // runtime_seconds stays out: timing belongs on stderr, not in the payload.
    return dump(json{{"n_max", report.n_max},
                     {"d_max", report.d_max},
                     {"graphs_checked", report.graphs_checked},
                     {"counterexamples", counter}});
}

std::string expansion_json(const ExpansionReport& report) {
    json j{{"pass", report.pass}, {"exhaustive", report.exhaustive}};
    j["witness"] = report.witness ? json(*report.witness) : json(nullptr);
    return dump(j);
}

std::string core_search_json(const CoreSearchResult& result) {
    json j{{"found", result.core.has_value()}};
    j["core"] = result.core ? j_graph(*result.core) : json(nullptr);
    j["certificate"] = j_certificate(result.certificate, "");
    j["diagnostics"] = result.diagnostics;
    return dump(j);
}

std::string trial_json(const PreservationTrial& trial) {
    return dump(json{{"sample", trial.sample},
                     {"empirical_min", j_q(trial.empirical_min)},
                     {"analytic_bound", j_q(trial.analytic_bound)},
                     {"bound_below_floor", trial.bound_below_floor},
                     {"supersets_checked", trial.supersets_checked}});
}

}  // namespace treestab
