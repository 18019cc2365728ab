// Acceptance gate: one line per criterion, exit status = number of failures.
// Every random instance is reproducible from the printed seed scheme, and
// every bound is checked in exact rational arithmetic against the
// brute-force oracles.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "test_support.hpp"
#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"
#include "treestab/graph.hpp"
#include "treestab/io.hpp"
#include "treestab/oracle.hpp"
#include "treestab/pipeline.hpp"
#include "treestab/regular.hpp"
#include "treestab/rng.hpp"
#include "treestab/subdivision.hpp"
#include "treestab/tree.hpp"
#include "treestab/tree_embed.hpp"

using namespace treestab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

// Random connected graph on an explicit label set inside a larger ambient
// space: random parent chain plus `extra` distinct chords.
Graph random_connected_on(int ambient, const VertexSet& vs, int extra,
                          std::uint64_t seed) {
    Rng rng(seed);
    EdgeSet edges;
    for (std::size_t i = 1; i < vs.size(); ++i) {
        int p = vs[static_cast<std::size_t>(rng.below(i))];
        edges.push_back({std::min(p, vs[i]), std::max(p, vs[i])});
    }
    std::sort(edges.begin(), edges.end());
    int placed = 0;
    for (int attempts = 0; placed < extra && attempts < 20 * (extra + 1); ++attempts) {
        int u = vs[static_cast<std::size_t>(rng.below(vs.size()))];
        int v = vs[static_cast<std::size_t>(rng.below(vs.size()))];
        if (u == v) continue;
        Edge e{std::min(u, v), std::max(u, v)};
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it != edges.end() && *it == e) continue;
        edges.insert(it, e);
        ++placed;
    }
    return Graph::make_on(ambient, vs, edges);
}

// ---------------------------------------------------------------------------
// 1. Flow sandwich: min_pairs >= q^3 n^2 / 9 and q >= min_pairs / (10 n^2).

Verdict sandwich() {
    const auto t0 = Clock::now();
    int violations = 0;
    const int total = 200;
    for (std::uint64_t seed = 1; seed <= total; ++seed) {
        const int n = 10 + static_cast<int>(seed % 3);
        Graph g = testsup::random_connected_graph(n, static_cast<int>(seed % 28), seed);
        const auto flow = flow_certify(g);
        const Q q_exact = oracle::exact_min_cut_ratio(g).density;
        const Q n2 = q_of(static_cast<long long>(n) * n);
        if (q_of(flow.profile.min_pairs) < q_exact * q_exact * q_exact * n2 / q_of(9))
            ++violations;
        if (q_exact < q_of(flow.profile.min_pairs) / (q_of(10) * n2)) ++violations;
    }
    const double secs = seconds_since(t0);
    std::ostringstream out;
    out << "cut-density sandwich: " << total << " graphs, " << violations
        << " violations, " << secs << "s (limit 120s)";
    return {violations == 0 && secs < 120.0, out.str()};
}

// ---------------------------------------------------------------------------
// 2. Preservation bounds never exceed the exact density of the derived graph.

Verdict preservation() {
    int violations = 0, constructions = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed);

        {   // Union of two overlapping connected pieces.
            const int n1 = 4 + static_cast<int>(rng.below(3));
            const int n2 = 4 + static_cast<int>(rng.below(3));
            const int ov = 1 + static_cast<int>(rng.below(
                static_cast<std::uint64_t>(std::min(n1, n2) - 1)));
            const int ambient = n1 - ov + n2;
            VertexSet v1, v2;
            for (int v = 0; v < n1; ++v) v1.push_back(v);
            for (int v = n1 - ov; v < ambient; ++v) v2.push_back(v);
            Graph g1 = random_connected_on(ambient, v1, 4, seed * 3 + 1);
            Graph g2 = random_connected_on(ambient, v2, 4, seed * 3 + 2);
            const Q q = std::min(oracle::exact_min_cut_ratio(g1).density,
                                 oracle::exact_min_cut_ratio(g2).density);
            const Q bound = union_bound(q, g1, g2);
            if (bound > oracle::exact_min_cut_ratio(g1.union_with(g2)).density) ++violations;
            ++constructions;
        }

        {   // Clique plus well-attached outsiders.
            const int k = 4 + static_cast<int>(rng.below(3));
            const int outs = 1 + static_cast<int>(rng.below(4));
            const int ambient = k + outs;
            EdgeSet edges = Graph::complete(k).edges;
            Rng pick = rng.split(7);
            for (int o = k; o < ambient; ++o) {
                VertexSet pool;
                for (int v = 0; v < k; ++v) pool.push_back(v);
                const std::size_t want =
                    static_cast<std::size_t>((k + 1) / 2 + static_cast<int>(pick.below(
                        static_cast<std::uint64_t>(k / 2 + 1))));
                for (int v : pick.sample_without_replacement(pool, want))
                    edges.push_back({v, o});
            }
            Graph h = Graph::make(ambient, edges);
            Graph g = Graph::complete(k);
            const Q qg = oracle::exact_min_cut_ratio(g).density;
            const Q bound = attach_bound(qg, g, h, q_of(1, 2));
            if (bound > oracle::exact_min_cut_ratio(h).density) ++violations;
            ++constructions;
        }

        {   // Deleting a small set from a near-complete graph.
            Rng del = rng.split(11);
            EdgeSet missing;
            const int misses = static_cast<int>(del.below(4));
            while (static_cast<int>(missing.size()) < misses) {
                int u = static_cast<int>(del.below(12));
                int v = static_cast<int>(del.below(12));
                if (u == v) continue;
                Edge e{std::min(u, v), std::max(u, v)};
                if (std::find(missing.begin(), missing.end(), e) == missing.end())
                    missing.push_back(e);
            }
            Graph g = Graph::complete(12).without_edges(missing);
            const Q qg = oracle::exact_min_cut_ratio(g).density;
            const VertexSet u{static_cast<int>(del.below(12))};
            const Q bound = delete_set_bound(qg, g, u);
            if (bound > oracle::exact_min_cut_ratio(g.without_vertices(u)).density)
                ++violations;
            ++constructions;
        }
    }
    std::ostringstream out;
    out << "preservation bounds: " << constructions << " constructions, " << violations
        << " violations";
    return {violations == 0 && constructions >= 300, out.str()};
}

// ---------------------------------------------------------------------------
// 3. Decomposition: deletions within budget, components exactly q-cut-dense.

Verdict decomposition() {
    int violations = 0, runs = 0;
    const Q qs[] = {q_of(1, 8), q_of(1, 4), q_of(1, 2)};
    for (std::uint64_t seed = 1; seed <= 34; ++seed) {
        const int n = 6 + static_cast<int>(seed % 9);
        Graph g = testsup::random_graph(n, 25 + static_cast<int>((seed * 13) % 60), seed);
        for (const Q& q : qs) {
            const DecomposeResult res = decompose(g, q, seed);
            ++runs;
            if (q_of(static_cast<long long>(res.deleted.size())) >
                q * q_of(static_cast<long long>(n) * n))
                ++violations;
            for (const Graph& comp : res.components) {
                if (comp.order() < 2) continue;
                if (oracle::exact_min_cut_ratio(comp).density < q) ++violations;
            }
        }
    }
    std::ostringstream out;
    out << "decomposition: " << runs << " runs, " << violations << " violations";
    return {violations == 0 && runs >= 100, out.str()};
}

// ---------------------------------------------------------------------------
// 4. Tree splitting invariants.

Verdict splitting() {
    int violations = 0, runs = 0;
    const Q lambdas[] = {q_of(1, 10), q_of(3, 10), q_of(1, 2)};
    const int delta = 5;
    for (std::uint64_t seed = 1; seed <= 167; ++seed) {
        const int n = 4 + static_cast<int>(seed % 57);
        const RootedTree t = testsup::random_tree(n, delta, seed);
        for (const Q& lambda : lambdas) {
            const SplitResult s = split_tree(t, lambda, delta);
            ++runs;
            bool ok = true;
            const Q qn = q_of(n);
            const Q q_order = q_of(s.q_subtree.order());
            // (i) |Q| in [(1-2l)n, (1-l)n + 2 Delta]
            if (q_order < (Q(1) - Q(2) * lambda) * qn) ok = false;
            if (q_order > (Q(1) - lambda) * qn + q_of(2 * delta)) ok = false;
            // (ii) at most Delta components, (iii) each of order <= l n
            if (s.components.size() > static_cast<std::size_t>(delta)) ok = false;
            for (const RootedTree& comp : s.components)
                if (q_of(comp.order()) > lambda * qn) ok = false;
            // (iv) externals sit in their components adjacent to Q, and the
            // pieces partition the tree.
            if (s.externals.size() != s.components.size()) ok = false;
            VertexSet all = s.q_subtree.verts;
            for (std::size_t i = 0; i < s.components.size() && ok; ++i) {
                const RootedTree& comp = s.components[i];
                const int y = s.externals[i];
                if (!set_contains(comp.verts, y)) ok = false;
                else if (!set_contains(s.q_subtree.verts, t.parent[y])) ok = false;
                all.insert(all.end(), comp.verts.begin(), comp.verts.end());
            }
            std::sort(all.begin(), all.end());
            if (all != t.verts) ok = false;
            if (!ok) ++violations;
        }
    }
    std::ostringstream out;
    out << "tree splitting: " << runs << " splits, " << violations << " violations";
    return {violations == 0 && runs >= 500, out.str()};
}

// ---------------------------------------------------------------------------
// 5. Greedy embedding of every small tree into the clique one above it.

Verdict greedy_small_trees() {
    int failed = 0, validated = 0;
    for (int d = 1; d <= 7; ++d) {
        const Graph host = Graph::complete(d + 1);
        for (const RootedTree& t : oracle::all_trees_with_edges(d)) {
            const GreedyResult res = greedy_embed(host, t, 0);
            if (!res.embedding || !validate_embedding(*res.embedding, 0)) {
                ++failed;
                continue;
            }
            ++validated;
        }
    }
    std::ostringstream out;
    out << "greedy into K_{d+1}: " << validated << " trees embedded and validated, "
        << failed << " failures";
    return {failed == 0 && validated == 47, out.str()};
}

// ---------------------------------------------------------------------------
// 6. The extremal clique family has the exact edge count and is T-free.

Verdict extremal_fidelity() {
    std::ostringstream out;
    for (int d = 3; d <= 5; ++d) {
        const int n = 3 * d;
        const Graph g =
            oracle::generate_extremal(oracle::ExtremalKind::DisjointCliques, n, d);
        if (2 * g.edge_count() != static_cast<long long>(d - 1) * n)
            return {false, "disjoint cliques d=" + std::to_string(d) + ": wrong edge count"};
        for (const RootedTree& t : oracle::all_trees_with_edges(d)) {
            const auto res = oracle::contains_tree(g, t);
            if (res.contains || !res.exhausted)
                return {false,
                        "disjoint cliques d=" + std::to_string(d) + ": contains a tree"};
        }
    }
    out << "extremal cliques d=3,4,5: exact edge counts, exhaustively tree-free";
    return {true, out.str()};
}

// ---------------------------------------------------------------------------
// 7. Exhaustive desk scan.

Verdict desk_scan() {
    const auto t0 = Clock::now();
    const auto report = oracle::erdos_sos_scan(7, 4);
    const double secs = seconds_since(t0);
    std::ostringstream out;
    out << "desk scan n<=7 d<=4: " << report.graphs_checked << " graphs, "
        << report.counterexamples.size() << " counterexamples, " << secs
        << "s (limit 600s)";
    return {report.counterexamples.empty() && report.graphs_checked == 2'131'019 &&
                secs < 600.0,
            out.str()};
}

// ---------------------------------------------------------------------------
// 8. Pipeline dichotomy on constructed T-free inputs.

Verdict dichotomy() {
    struct Instance {
        Graph g;
        RootedTree t;
        bool clique_family;
    };
    std::vector<Instance> suite;
    for (int i = 0; i < 20; ++i) {  // disjoint-clique families
        const int d = 4 + i % 3;
        const int blocks = 3 + i % 4;
        suite.push_back({testsup::clique_blocks(blocks, d),
                         testsup::random_tree(d + 1, d, static_cast<std::uint64_t>(i + 1)),
                         true});
    }
    for (int i = 0; i < 15; ++i) {  // chains of K_4 glued at cut vertices
        const int blocks = 2 + i % 4;
        EdgeSet edges;
        for (int b = 0; b < blocks; ++b)
            for (int u = 0; u < 4; ++u)
                for (int v = u + 1; v < 4; ++v) edges.push_back({3 * b + u, 3 * b + v});
        suite.push_back({Graph::make(3 * blocks + 1, edges), RootedTree::star_tree(7),
                         false});
    }
    for (int i = 0; i < 15; ++i) {  // (d-1)-regular circulants
        const int d = 4 + i % 3;
        const int n = 12 + 2 * (i % 5);
        suite.push_back({oracle::generate_extremal(oracle::ExtremalKind::Regular, n, d),
                         RootedTree::star_tree(d), false});
    }

    int inconclusive_cliques = 0, bad_certificates = 0, bad_embeddings = 0,
        certificates = 0, embeddings = 0;
    for (const Instance& inst : suite) {
        ParamHierarchy params;
        params.delta_cap = std::max(params.delta_cap, inst.t.max_degree());
        const StructureResult res = hyperstability(inst.g, inst.t, params);
        if (res.outcome == Outcome::Inconclusive && inst.clique_family)
            ++inconclusive_cliques;
        if (res.embedding) {
            ++embeddings;
            if (!validate_embedding(*res.embedding)) ++bad_embeddings;
        }
        if (res.certificate) {
            ++certificates;
            const CertificateAudit audit =
                validate_certificate(inst.g, inst.t, *res.certificate, true);
            if (!audit.pass || q_of(audit.max_cover) > audit.cover_target ||
                audit.deleted_vs_target > 0)
                ++bad_certificates;
        }
    }
    std::ostringstream out;
    out << "pipeline dichotomy: " << suite.size() << " inputs, " << embeddings
        << " embeddings, " << certificates << " certificates, " << inconclusive_cliques
        << " inconclusive clique runs, " << bad_certificates + bad_embeddings
        << " invalid results";
    return {inconclusive_cliques == 0 && bad_certificates == 0 && bad_embeddings == 0,
            out.str()};
}

// ---------------------------------------------------------------------------
// 9. Subdivision finder on the contracted K_5.

Verdict subdivisions() {
    EdgeSet edges;
    int a = 5;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            edges.push_back({i, a});
            edges.push_back({j, a});
            ++a;
        }
    const Graph bip = Graph::make(15, edges);
    const VertexSet side_a{5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    const VertexSet side_b{0, 1, 2, 3, 4};

    int patterns = 0, failed = 0;
    for (int d = 0; d <= 4; ++d) {
        for (const RootedTree& pattern : oracle::all_trees_with_edges(d)) {
            ++patterns;
            const auto res = find_1_subdivision(bip, side_a, side_b, pattern, 1, 1, 7);
            if (!res.witness || !validate_subdivision(bip, side_a, side_b, *res.witness))
                ++failed;
        }
    }
    std::ostringstream out;
    out << "1-subdivisions in contracted K_5: " << patterns << " patterns, " << failed
        << " failures";
    return {failed == 0 && patterns == 8, out.str()};
}

// ---------------------------------------------------------------------------
// 10. Regular subgraphs in the 0.45 n^2 regime.

Verdict regular_regime() {
    int failed = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        EdgeSet missing;
        while (missing.size() < 30u) {
            int u = static_cast<int>(rng.below(30));
            int v = static_cast<int>(rng.below(30));
            if (u == v) continue;
            Edge e{std::min(u, v), std::max(u, v)};
            if (std::find(missing.begin(), missing.end(), e) == missing.end())
                missing.push_back(e);
        }
        const Graph g = Graph::complete(30).without_edges(missing);
        const RegularSearchResult res = find_regular_subgraph(g, 2);
        bool ok = res.flag == RegularSearchFlag::FoundWithinBudget && res.subgraph &&
                  res.subgraph->is_subgraph_of(g);
        if (ok)
            for (int v : res.subgraph->verts)
                if (res.subgraph->degree(v) != 2) ok = false;
        if (!ok) ++failed;
    }
    std::ostringstream out;
    out << "2-regular subgraphs at e=405, n=30: 50 graphs, " << failed << " failures";
    return {failed == 0, out.str()};
}

// ---------------------------------------------------------------------------
// 11. CLI determinism: identical flags and seed, byte-identical primary JSON.

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Verdict cli_determinism() {
    const std::string cli = "\"" TREESTAB_CLI_PATH "\"";
    const std::string dir = "/tmp/treestab_acceptance";
    if (std::system(("mkdir -p " + dir).c_str()) != 0)
        return {false, "CLI determinism: cannot create scratch directory"};
    save_graph(testsup::clique_blocks(4, 5), dir + "/g.el");
    save_tree(RootedTree::path_tree(6), dir + "/t.tree");

    const std::vector<std::string> commands = {
        " hyperstab " + dir + "/g.el " + dir + "/t.tree --seed 7 --out ",
        " decompose " + dir + "/g.el --q 1/4 --seed 3 --out ",
        " cutdense exact " + dir + "/g.el --out ",
    };
    int mismatches = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const std::string out1 = dir + "/out" + std::to_string(i) + "_a.json";
        const std::string out2 = dir + "/out" + std::to_string(i) + "_b.json";
        if (std::system((cli + commands[i] + out1).c_str()) != 0 ||
            std::system((cli + commands[i] + out2).c_str()) != 0) {
            ++mismatches;
            continue;
        }
        const std::string a = slurp(out1);
        if (a.empty() || a != slurp(out2)) ++mismatches;
    }
    std::ostringstream out;
    out << "CLI determinism: " << commands.size() << " commands run twice, " << mismatches
        << " mismatches";
    return {mismatches == 0, out.str()};
}

int* failures_slot() {
    static int failures = 0;
    return &failures;
}

void run(int idx, const char* tag, Verdict (*fn)()) {
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v = {false, std::string(tag) + ": exception: " + e.what()};
    }
    std::printf("%s %2d. %s\n", v.pass ? "PASS" : "FAIL", idx, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++*failures_slot();
}

}  // namespace

int main() {
    run(1, "cut-density sandwich", sandwich);
    run(2, "preservation bounds", preservation);
    run(3, "decomposition", decomposition);
    run(4, "tree splitting", splitting);
    run(5, "greedy embedding", greedy_small_trees);
    run(6, "extremal fidelity", extremal_fidelity);
    run(7, "desk scan", desk_scan);
    run(8, "pipeline dichotomy", dichotomy);
    run(9, "subdivision finder", subdivisions);
    run(10, "regular regime", regular_regime);
    run(11, "CLI determinism", cli_determinism);
    return *failures_slot();
}
