#include "doctest.h"

#include <algorithm>

#include "test_support.hpp"
#include "treestab/cutdense.hpp"
#include "treestab/errors.hpp"
#include "treestab/graph.hpp"
#include "treestab/oracle.hpp"

using namespace treestab;

namespace {

// Recomputes e(A,B)/(|A||B|) for the bipartition (a, V \ a).
Q cut_density(const Graph& g, const VertexSet& a) {
    VertexSet b = set_minus(g.verts, a);
    REQUIRE(!a.empty());
    REQUIRE(!b.empty());
    return Q(Int(edge_count_between(g, a, b)), Int(a.size()) * Int(b.size()));
}

}  // namespace

TEST_CASE("exact_cut_density: path and star reference values") {
    // Path a-b-c: the worst cut isolates an endpoint, density 1/2.
    Graph path = Graph::path_graph(3);
    auto cert = exact_cut_density(path);
    CHECK(cert.kind == CertKind::Exact);
    CHECK(cert.q_value == q_of(1, 2));
    REQUIRE(cert.witness.has_value());
    CHECK(cert.witness->size() == 1u);
    CHECK(cut_density(path, *cert.witness) == q_of(1, 2));

    // Star K_{1,4}: center plus three leaves against the last leaf, 1/4.
    Graph star = Graph::star_graph(4);
    auto scert = exact_cut_density(star);
    CHECK(scert.q_value == q_of(1, 4));
    REQUIRE(scert.witness.has_value());
    CHECK(scert.witness->size() == 4u);
    CHECK(set_contains(*scert.witness, 0));  // the center sits on the big side
    CHECK(cut_density(star, *scert.witness) == q_of(1, 4));

    // Complete graphs meet every cut with equality: density exactly 1.
    CHECK(exact_cut_density(Graph::complete(5)).q_value == q_of(1));
}

TEST_CASE("exact_cut_density: contract violations") {
    CHECK_THROWS_AS(exact_cut_density(Graph::empty_graph(1)), PreconditionError);
    CHECK_THROWS_AS(exact_cut_density(Graph::complete(23)), BudgetExceeded);
    CHECK_NOTHROW(exact_cut_density(Graph::complete(23), 23));
}

TEST_CASE("exact_cut_density agrees with the independent oracle") {
    for (unsigned long long seed = 1; seed <= 30; ++seed) {
        Graph g = testsup::random_graph(9, 40, seed);
        if (g.order() < 2) continue;
        auto cert = exact_cut_density(g);
        auto ref = oracle::exact_min_cut_ratio(g);
        CHECK(cert.q_value == ref.density);
        REQUIRE(cert.witness.has_value());
        CHECK(cut_density(g, *cert.witness) == ref.density);
    }
}

TEST_CASE("union_bound: bowtie reference value") {
    // Two triangles sharing one vertex, each 1-cut-dense: the union keeps
    // q |V1 n V2| / (4 |V1 u V2|) = 1/20; the true density is 1/3.
    Graph g1 = Graph::make_on(5, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
    Graph g2 = Graph::make_on(5, {2, 3, 4}, {{2, 3}, {2, 4}, {3, 4}});
    Q bound = union_bound(q_of(1), g1, g2);
    CHECK(bound == q_of(1, 20));
    Graph bowtie = g1.union_with(g2);
    auto exact = oracle::exact_min_cut_ratio(bowtie);
    CHECK(exact.density == q_of(1, 3));
    CHECK(exact.density >= bound);
}

TEST_CASE("union_bound holds for two cliques overlapping in two vertices") {
    VertexSet v2{3, 4, 5, 6, 7};
    EdgeSet e2;
    for (std::size_t i = 0; i < v2.size(); ++i)
        for (std::size_t j = i + 1; j < v2.size(); ++j)
            e2.push_back({v2[i], v2[j]});
    Graph h = Graph::make_on(8, v2, e2);
    Graph g1 = Graph::make_on(8, {0, 1, 2, 3, 4}, Graph::complete(5).edges);
    Q q = std::min(oracle::exact_min_cut_ratio(g1).density,
                   oracle::exact_min_cut_ratio(h).density);
    Q bound = union_bound(q, g1, h);
    CHECK(bound == q * q_of(2, 32));
    CHECK(oracle::exact_min_cut_ratio(g1.union_with(h)).density >= bound);
}

TEST_CASE("attach_bound: clique-plus-one-vertex reference value") {
    // h = K_3 plus a vertex adjacent to two of the three: delta = 2/3 and
    // the bound is 1 * (2/3) * 9 / (4 * 16) = 6/64; the true density is 2/3.
    Graph g = Graph::make_on(4, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
    Graph h = Graph::make(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}});
    Q bound = attach_bound(q_of(1), g, h, q_of(2, 3));
    CHECK(bound == q_of(6, 64));
    auto exact = oracle::exact_min_cut_ratio(h);
    CHECK(exact.density == q_of(2, 3));
    CHECK(exact.density >= bound);

    // A vertex below the neighbor quota trips the precondition.
    Graph weak = Graph::make(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
    CHECK_THROWS_AS(attach_bound(q_of(1), g, weak, q_of(2, 3)), PreconditionError);
}

TEST_CASE("delete_set_bound: halving with a size guard") {
    Graph g = Graph::complete(12);
    CHECK(delete_set_bound(q_of(1), g, {0}) == q_of(1, 2));
    // |u| = 2 > 1*12/8 is rejected.
    CHECK_THROWS_AS(delete_set_bound(q_of(1), g, {0, 1}), PreconditionError);

    // The halved value really is a lower bound after deleting u.
    for (unsigned long long seed = 1; seed <= 10; ++seed) {
        Graph host = testsup::random_graph(10, 85, seed);
        if (host.order() < 3 || !host.connected()) continue;
        Q q = oracle::exact_min_cut_ratio(host).density;
        if (Q(Int(8)) > q * Int(host.order())) continue;  // no room for |u| = 1
        VertexSet u{host.verts[static_cast<std::size_t>(seed) % host.verts.size()]};
        Q bound = delete_set_bound(q, host, u);
        Graph rest = host.without_vertices(u);
        if (rest.order() < 2) continue;
        CHECK(oracle::exact_min_cut_ratio(rest).density >= bound);
    }
}

TEST_CASE("find_cut_dense_subgraph: core inside one of two cliques") {
    Graph g = testsup::clique_blocks(2, 10);
    auto res = find_cut_dense_subgraph(g, q_of(1, 5), q_of(1, 5), q_of(1, 4), /*seed=*/1);
    REQUIRE(res.core.has_value());
    CHECK(res.core->order() == 5);  // ceil(mu * |g|) = ceil(20/4)
    // The core cannot straddle the components, so it sits inside one clique.
    bool low = std::all_of(res.core->verts.begin(), res.core->verts.end(),
                           [](int v) { return v < 10; });
    bool high = std::all_of(res.core->verts.begin(), res.core->verts.end(),
                            [](int v) { return v >= 10; });
    CHECK((low || high));
    CHECK(oracle::exact_min_cut_ratio(*res.core).density >= q_of(1, 5));
}

TEST_CASE("find_cut_dense_subgraph rejects sparse inputs") {
    CHECK_THROWS_AS(
        find_cut_dense_subgraph(Graph::path_graph(10), q_of(1, 2), q_of(1, 2), q_of(1, 4), 1),
        PreconditionError);
}

TEST_CASE("expansion_check: two-clique witness and a passing clique") {
    // Two disjoint K_11 at factor 10: a pair inside one clique has only nine
    // outside neighbors, below 10*2.
    Graph g = testsup::clique_blocks(2, 11);
    auto rep = expansion_check(g, q_of(10), /*max_size=*/2);
    CHECK_FALSE(rep.pass);
    CHECK(rep.exhaustive);
    REQUIRE(rep.witness.has_value());
    const VertexSet& s = *rep.witness;
    VertexSet boundary;
    for (int v : s)
        for (int w : g.neighbors(v))
            if (!set_contains(s, w)) boundary.push_back(w);
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    CHECK(Q(Int(boundary.size())) < q_of(10) * Int(s.size()));

    auto ok = expansion_check(Graph::complete(12), q_of(2), 3);
    CHECK(ok.pass);
    CHECK(ok.exhaustive);
    CHECK_FALSE(ok.witness.has_value());
}

TEST_CASE("sample_preservation_trial is a structured report, not a certifier") {
    Graph c9 = Graph::cycle_graph(9);
    Q q = oracle::exact_min_cut_ratio(c9).density;
    CHECK(q == q_of(1, 10));  // worst arc cut: 2 / (4*5)
    auto trial = sample_preservation_trial(c9, q, q_of(2, 3), /*seed=*/5);
    CHECK(trial.supersets_checked > 0);
    CHECK(trial.analytic_bound > Q(0));
    // p^(q^-4) with q = 1/10 is astronomically small; the clamp must fire.
    CHECK(trial.bound_below_floor);
    for (int v : trial.sample) CHECK(set_contains(c9.verts, v));
}
