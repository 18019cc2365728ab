// treestab: command-line front end for the graph-structure toolkit.
//
// Exit codes: 0 success, 1 usage or precondition failure, 2 inconclusive
// (no embedding / no certificate / budget ran out), 3 validation failure.
// Primary JSON goes to stdout (or --out); warnings and timings to stderr.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treestab/clump.hpp"
#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"
#include "treestab/io.hpp"
#include "treestab/oracle.hpp"
#include "treestab/params.hpp"
#include "treestab/pipeline.hpp"
#include "treestab/serialize.hpp"
#include "treestab/subdivision.hpp"
#include "treestab/tree_embed.hpp"

namespace {

using treestab::Edge;
using treestab::EdgeSet;
using treestab::Graph;
using treestab::Q;
using treestab::RootedTree;
using treestab::VertexSet;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitValidation = 3;

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw treestab::ParseError("cannot open output file " + out_path);
    out << payload;
}

std::string graph_text(const Graph& g) {
    std::string s = std::to_string(g.ambient_n) + " " + std::to_string(g.edge_count()) + "\n";
    for (const Edge& e : g.edges)
        s += std::to_string(e.first) + " " + std::to_string(e.second) + "\n";
    return s;
}

// Biconnected components; the "pieces" embedding method treats each block as
// a piece and each shared cut vertex as the connector between two blocks.
std::vector<VertexSet> block_vertex_sets(const Graph& g) {
    std::vector<int> disc(static_cast<std::size_t>(g.ambient_n), -1);
    std::vector<int> low(static_cast<std::size_t>(g.ambient_n), 0);
    std::vector<Edge> stack;
    std::vector<VertexSet> blocks;
    int timer = 0;

    auto pop_block = [&](const Edge& until) {
        VertexSet verts;
        while (!stack.empty()) {
            const Edge e = stack.back();
            stack.pop_back();
            verts.push_back(e.first);
            verts.push_back(e.second);
            if (e == until) break;
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        blocks.push_back(std::move(verts));
    };

    std::function<void(int, int)> dfs = [&](int v, int parent) {
        disc[v] = low[v] = timer++;
        for (int w : g.neighbors(v)) {
            if (w == parent) {
                parent = -1;  // skip the tree edge once; parallel edges don't exist
                continue;
            }
            if (disc[w] < 0) {
                const Edge e{std::min(v, w), std::max(v, w)};
                stack.push_back(e);
                dfs(w, v);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) pop_block(e);
            } else if (disc[w] < disc[v]) {
                stack.push_back({std::min(v, w), std::max(v, w)});
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    for (int v : g.verts)
        if (disc[v] < 0 && g.degree(v) > 0) dfs(v, -1);
    return blocks;
}

int run_embed_pieces(const Graph& g, const RootedTree& t,
                     const treestab::ParamHierarchy& params, const std::string& tree_file,
                     const std::string& host_file, const std::string& out_path) {
    const std::vector<VertexSet> block_sets = block_vertex_sets(g);
    if (block_sets.empty())
        throw treestab::PreconditionError("pieces method: the host graph has no edges");
    std::vector<Graph> pieces;
    pieces.reserve(block_sets.size());
    for (const VertexSet& b : block_sets) pieces.push_back(g.induced(b));

    // Blocks sharing a vertex are adjacent; a BFS forest over that adjacency
    // becomes the piece tree, with the shared vertex as the connector.
    const int np = static_cast<int>(pieces.size());
    std::vector<int> parents(static_cast<std::size_t>(np), -2);
    std::map<std::pair<int, int>, int> connectors;
    std::vector<int> order{0};
    parents[0] = -1;
    std::vector<char> seen(static_cast<std::size_t>(np), 0);
    seen[0] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const int at = order[head];
        for (int j = 0; j < np; ++j) {
            if (seen[j]) continue;
            const VertexSet shared = treestab::set_intersect(pieces[at].verts, pieces[j].verts);
            if (shared.empty()) continue;
            seen[j] = 1;
            parents[j] = at;
            connectors[{at, j}] = shared.front();
            order.push_back(j);
        }
    }
    for (int j = 0; j < np; ++j)
        if (!seen[j])
            throw treestab::PreconditionError(
                "pieces method: the host graph is disconnected across blocks");

    const RootedTree s_tree = RootedTree::from_parents(np, 0, parents);
    const treestab::StagedEmbedResult res =
        treestab::embed_tree_of_pieces(pieces, s_tree, connectors, t, params);
    for (const std::string& line : res.stage_log) std::cerr << line << "\n";
    if (!res.embedding) {
        json j{{"found", false}, {"method", "pieces"}, {"stage_failed", res.stage_failed}};
        emit(j.dump(2) + "\n", out_path);
        return kExitInconclusive;
    }
    treestab::Embedding emb = *res.embedding;
    emb.host = g;
    std::string why;
    if (!treestab::validate_embedding(emb, std::nullopt, &why))
        throw treestab::ValidationError("pieces embedding failed validation: " + why);
    emit(treestab::embedding_json(emb, tree_file, host_file, true), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph-structure toolkit: cut-density certification, decomposition, "
                 "tree embedding, and the hyperstability pipeline"};
    // --h is a pipeline parameter, so help lives on --help alone.
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::uint64_t seed = 0;
    long long budget = 1'000'000;
    std::string out_path;
    bool strict_hierarchy = false;
    int jobs = 1;
    app.add_option("--seed", seed, "random seed driving all sampled choices");
    app.add_option("--budget", budget, "node budget for backtracking searches");
    app.add_option("--out", out_path, "write primary JSON here instead of stdout");
    app.add_flag("--strict-hierarchy", strict_hierarchy,
                 "treat parameter-hierarchy warnings as fatal");
    app.add_option("--jobs", jobs, "worker cap (accepted for interface stability)");

    // cutdense exact|flow <graph>
    auto* cut = app.add_subcommand("cutdense", "certify cut-density");
    std::string cut_mode, cut_graph;
    cut->add_option("mode", cut_mode, "exact or flow")
        ->required()
        ->check(CLI::IsMember({"exact", "flow"}));
    cut->add_option("graph", cut_graph, "edge-list file")->required();

    // decompose <graph> --q
    auto* dec = app.add_subcommand("decompose", "delete violating cuts until all "
                                                "components are q-cut-dense");
    std::string dec_graph, dec_q = "1/4";
    dec->add_option("graph", dec_graph)->required();
    dec->add_option("--q", dec_q, "density threshold (rational)");

    // embed <graph> <tree> --method
    auto* emb = app.add_subcommand("embed", "embed a tree into a host graph");
    std::string emb_graph, emb_tree, emb_method = "greedy";
    int emb_delta_cap = 5;
    emb->add_option("graph", emb_graph)->required();
    emb->add_option("tree", emb_tree)->required();
    emb->add_option("--method", emb_method)
        ->check(CLI::IsMember({"greedy", "expander", "cutdense", "pieces"}));
    emb->add_option("--delta-cap", emb_delta_cap, "max tree degree the methods assume");

    // hyperstab <graph> <tree> + parameter knobs
    auto* hyp = app.add_subcommand("hyperstab", "run the full structure pipeline");
    std::string hyp_graph, hyp_tree;
    std::string f_eps = "1/2", f_p = "1/4", f_alpha = "1/8", f_kappa = "1/16",
                f_gamma = "1/32", f_mu = "1/4";
    int f_delta_cap = 5, f_h = 2, f_L = 2;
    hyp->add_option("graph", hyp_graph)->required();
    hyp->add_option("tree", hyp_tree)->required();
    hyp->add_option("--eps", f_eps, "cover slack epsilon (rational)");
    hyp->add_option("--delta-cap", f_delta_cap, "max admissible tree degree");
    hyp->add_option("--p", f_p, "extraction cut-density scale");
    hyp->add_option("--h", f_h, "host order divisor: m = ceil(d/h)");
    hyp->add_option("--alpha", f_alpha, "reservoir sampling scale");
    hyp->add_option("--kappa", f_kappa, "clump core density scale");
    hyp->add_option("--L", f_L, "subdivision pattern arity and height");
    hyp->add_option("--gamma", f_gamma, "overlap fraction threshold");
    hyp->add_option("--mu", f_mu, "core fraction in the cut-dense search");

    // oracle scan|contains|cover
    auto* ora = app.add_subcommand("oracle", "brute-force auditors");
    auto* ora_scan = ora->add_subcommand("scan", "exhaustive small-graph tree scan");
    int scan_n = 6, scan_d = 3;
    ora_scan->add_option("--n", scan_n, "max graph order (<= 7)");
    ora_scan->add_option("--d", scan_d, "max tree edge count");
    auto* ora_contains = ora->add_subcommand("contains", "exact tree containment");
    std::string oc_graph, oc_tree;
    ora_contains->add_option("graph", oc_graph)->required();
    ora_contains->add_option("tree", oc_tree)->required();
    auto* ora_cover = ora->add_subcommand("cover", "minimum vertex cover");
    std::string ocov_graph;
    ora_cover->add_option("graph", ocov_graph)->required();
    ora->require_subcommand(1);

    // gen cliques|regular|join --n --d
    auto* gen = app.add_subcommand("gen", "classical extremal constructions");
    std::string gen_kind;
    int gen_n = 9, gen_d = 3;
    gen->add_option("kind", gen_kind, "cliques, regular, or join")
        ->required()
        ->check(CLI::IsMember({"cliques", "regular", "join"}));
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--d", gen_d, "tree-order parameter d");

    CLI11_PARSE(app, argc, argv);

    treestab::ParamHierarchy params;
    params.seed = seed;
    params.budgets.search_nodes = budget;
    (void)jobs;

    try {
        if (*cut) {
            const Graph g = treestab::load_graph(cut_graph);
            if (cut_mode == "exact") {
                const treestab::CutCertificate cert =
                    treestab::exact_cut_density(g, params.budgets.exact_cut_max_n);
                emit(treestab::certificate_json(cert), out_path);
            } else {
                const treestab::FlowCertifyResult res = treestab::flow_certify(g);
                std::string table_path;
                if (!out_path.empty()) {
                    table_path = out_path + ".pairs.json";
                    std::ofstream table(table_path, std::ios::binary);
                    table << treestab::path_profile_json(res.profile);
                }
                if (res.certificate.flagged_small_n)
                    std::cerr << "warning: flow lower bound carries no guarantee below "
                                 "order 10\n";
                emit(treestab::certificate_json(res.certificate, table_path), out_path);
            }
            return kExitOk;
        }

        if (*dec) {
            const Graph g = treestab::load_graph(dec_graph);
            const treestab::DecomposeResult res =
                treestab::decompose(g, treestab::parse_rational(dec_q), seed, params.budgets);
            if (!res.heuristic_complete_all)
                std::cerr << "warning: some components exceeded the exact budget; a "
                             "violating cut may have been missed\n";
            emit(treestab::decompose_json(res), out_path);
            return kExitOk;
        }

        if (*emb) {
            const Graph g = treestab::load_graph(emb_graph);
            const RootedTree t = treestab::load_tree(emb_tree);
            params.delta_cap = emb_delta_cap;
            params.finalize(t.order());
            if (emb_method == "pieces")
                return run_embed_pieces(g, t, params, emb_tree, emb_graph, out_path);

            std::optional<treestab::Embedding> found;
            std::string failure;
            if (emb_method == "greedy") {
                if (g.order() == 0)
                    throw treestab::PreconditionError("greedy embed: empty host");
                const treestab::GreedyResult r = treestab::greedy_embed(g, t, g.verts.front());
                found = r.embedding;
                failure = r.failure;
            } else if (emb_method == "expander") {
                const treestab::ExpanderResult r =
                    treestab::expander_embed(g, t, params.delta_cap);
                found = r.embedding;
                failure = r.failure;
                std::cerr << "backtracks: " << r.backtracks << "\n";
            } else {  // cutdense: the whole host doubles as the anchor region
                const treestab::StagedEmbedResult r =
                    treestab::embed_cut_dense(g, g, t, params, seed);
                for (const std::string& line : r.stage_log) std::cerr << line << "\n";
                found = r.embedding;
                failure = r.stage_failed.empty() ? "" : ("stage " + r.stage_failed);
            }
            if (!found) {
                json j{{"found", false}, {"method", emb_method}, {"failure", failure}};
                emit(j.dump(2) + "\n", out_path);
                return kExitInconclusive;
            }
            treestab::Embedding e = *found;
            e.host = g;
            std::string why;
            if (!treestab::validate_embedding(e, std::nullopt, &why))
                throw treestab::ValidationError("embedding failed validation: " + why);
            emit(treestab::embedding_json(e, emb_tree, emb_graph, true), out_path);
            return kExitOk;
        }

        if (*hyp) {
            const Graph g = treestab::load_graph(hyp_graph);
            const RootedTree t = treestab::load_tree(hyp_tree);
            params.epsilon = treestab::parse_rational(f_eps);
            params.delta_cap = f_delta_cap;
            params.p = treestab::parse_rational(f_p);
            params.h = f_h;
            params.alpha = treestab::parse_rational(f_alpha);
            params.kappa = treestab::parse_rational(f_kappa);
            params.L = f_L;
            params.gamma = treestab::parse_rational(f_gamma);
            params.mu = treestab::parse_rational(f_mu);
            params.finalize(t.order());
            const std::string complaint = params.hierarchy_complaint();
            if (!complaint.empty()) {
                std::cerr << "hierarchy warning: " << complaint << "\n";
                if (strict_hierarchy) return kExitUsage;
            }
            const treestab::StructureResult res = treestab::hyperstability(g, t, params);
            emit(treestab::result_json(res, hyp_tree, hyp_graph), out_path);
            return res.outcome == treestab::Outcome::Inconclusive ? kExitInconclusive
                                                                  : kExitOk;
        }

        if (*ora) {
            if (*ora_scan) {
                const treestab::oracle::ScanReport rep =
                    treestab::oracle::erdos_sos_scan(scan_n, scan_d);
                std::cerr << "scan runtime: " << rep.runtime_seconds << "s\n";
                emit(treestab::scan_report_json(rep), out_path);
                return rep.counterexamples.empty() ? kExitOk : kExitValidation;
            }
            if (*ora_contains) {
                const Graph g = treestab::load_graph(oc_graph);
                const RootedTree t = treestab::load_tree(oc_tree);
                const treestab::oracle::ContainResult r =
                    treestab::oracle::contains_tree(g, t);
                emit(r.contains ? "yes\n" : (r.exhausted ? "no\n" : "unknown\n"), out_path);
                return kExitOk;
            }
            const Graph g = treestab::load_graph(ocov_graph);
            const treestab::oracle::CoverResult r =
                treestab::oracle::min_vertex_cover(g, budget);
            json j{{"cover", r.cover}, {"optimal", r.optimal}, {"lower_bound", r.lower_bound}};
            emit(j.dump(2) + "\n", out_path);
            return kExitOk;
        }

        if (*gen) {
            const treestab::oracle::ExtremalKind kind =
                gen_kind == "cliques"   ? treestab::oracle::ExtremalKind::DisjointCliques
                : gen_kind == "regular" ? treestab::oracle::ExtremalKind::Regular
                                        : treestab::oracle::ExtremalKind::DominatingSetJoin;
            const Graph g = treestab::oracle::generate_extremal(kind, gen_n, gen_d);
            emit(graph_text(g), out_path);
            return kExitOk;
        }
    } catch (const treestab::ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const treestab::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const treestab::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitUsage;
    } catch (const treestab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
