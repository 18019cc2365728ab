#include "doctest.h"

#include <algorithm>

#include "test_support.hpp"
#include "treestab/errors.hpp"
#include "treestab/graph.hpp"
#include "treestab/rational.hpp"

using namespace treestab;

TEST_CASE("constructors normalize and validate") {
    Graph g = Graph::make(4, {{1, 0}, {2, 3}, {0, 2}});
    CHECK(g.order() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK_FALSE(g.has_edge(1, 2));
    CHECK_THROWS_AS(Graph::make(3, {{0, 0}}), ValidationError);
    CHECK_THROWS_AS(Graph::make(3, {{0, 3}}), ValidationError);

    Graph sub = Graph::make_on(6, {0, 2, 4}, {{0, 2}, {2, 4}});
    CHECK(sub.order() == 3);
    CHECK(sub.ambient_n == 6);
    CHECK_THROWS_AS(Graph::make_on(6, {0, 2}, {{0, 4}}), ValidationError);
}

TEST_CASE("standard families have the expected sizes") {
    CHECK(Graph::complete(5).edge_count() == 10);
    CHECK(Graph::path_graph(5).edge_count() == 4);
    CHECK(Graph::cycle_graph(6).edge_count() == 6);
    CHECK(Graph::star_graph(5).order() == 6);
    CHECK(Graph::star_graph(5).degree(0) == 5);
    CHECK(Graph::empty_graph(3).edge_count() == 0);
}

TEST_CASE("degree bookkeeping") {
    Graph g = Graph::complete(4);
    CHECK(g.min_degree() == 3);
    CHECK(g.max_degree() == 3);
    for (int v : g.verts) CHECK(g.neighbors(v).size() == 3u);
}

TEST_CASE("induced subgraphs and vertex/edge removal") {
    Graph g = Graph::complete(5);
    Graph h = g.induced({0, 1, 2});
    CHECK(h.order() == 3);
    CHECK(h.edge_count() == 3);
    CHECK(h.ambient_n == 5);

    Graph minus = g.without_vertices({4});
    CHECK(minus.order() == 4);
    CHECK(minus.edge_count() == 6);

    Graph cut = g.without_edges({{0, 1}});
    CHECK(cut.edge_count() == 9);
    CHECK_FALSE(cut.has_edge(0, 1));
}

TEST_CASE("components and connectivity") {
    Graph two = Graph::disjoint_union({Graph::complete(3), Graph::complete(2)});
    CHECK_FALSE(two.connected());
    auto comps = two.components();
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].order() + comps[1].order() == 5);
    CHECK(Graph::complete(4).connected());
    // Isolated vertices each form their own component.
    Graph iso = Graph::make(3, {{0, 1}});
    CHECK(iso.components().size() == 2);
}

TEST_CASE("union_with merges overlapping subgraphs") {
    Graph a = Graph::make_on(5, {0, 1, 2}, {{0, 1}, {1, 2}});
    Graph b = Graph::make_on(5, {2, 3, 4}, {{2, 3}, {3, 4}});
    Graph u = a.union_with(b);
    CHECK(u.order() == 5);
    CHECK(u.edge_count() == 4);
    CHECK(a.is_subgraph_of(u));
    CHECK(b.is_subgraph_of(u));
}

TEST_CASE("min_degree_peel: pendant-on-clique example") {
    // K_4 plus a pendant vertex hanging off vertex 0: 7 edges on 5 vertices,
    // so the density premise holds at x = 7/5; the peel must discard the
    // pendant and return the clique with min degree 3 >= floor(7/5)+1.
    Graph g = Graph::make(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}});
    Graph h = min_degree_peel(g, q_of(7, 5));
    CHECK(h.order() == 4);
    CHECK(h.edge_count() == 6);
    CHECK_FALSE(h.has_vertex(4));
    CHECK(h.min_degree() == 3);
}

TEST_CASE("min_degree_peel rejects graphs below the density premise") {
    CHECK_THROWS_AS(min_degree_peel(Graph::path_graph(5), q_of(2)), PreconditionError);
}

TEST_CASE("min_degree_peel property: min degree and density survive") {
    // Whenever e(g) >= x|g|, the peeled graph keeps e(H) >= x|H| and reaches
    // min degree > x. Random dense-ish graphs across seeds.
    for (unsigned long long seed = 1; seed <= 40; ++seed) {
        Graph g = testsup::random_graph(12, 45, seed);
        Q x = q_of(3, 2);
        if (Q(Int(g.edge_count())) < x * Int(g.order())) continue;
        Graph h = min_degree_peel(g, x);
        REQUIRE(h.order() > 0);
        CHECK(Q(Int(h.edge_count())) >= x * Int(h.order()));
        CHECK(Int(h.min_degree()) >= floor_q(x) + 1);
    }
}

TEST_CASE("peel_below removes exactly the low-degree fringe") {
    Graph g = Graph::make(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}});
    Graph h = peel_below(g, 1);  // drop degree <= 1 vertices, cascading
    CHECK(h.order() == 4);
    CHECK(h.min_degree() == 3);
    // Peeling a path at cut 1 cascades to nothing.
    CHECK(peel_below(Graph::path_graph(6), 1).order() == 0);
}

TEST_CASE("densest_component picks by edge/vertex ratio") {
    Graph g = Graph::disjoint_union({Graph::complete(4), Graph::complete(2)});
    Graph d = densest_component(g);
    CHECK(d.order() == 4);
    CHECK(d.edge_count() == 6);
}

TEST_CASE("edge_count_between agrees with the definition") {
    for (unsigned long long seed = 1; seed <= 25; ++seed) {
        Graph g = testsup::random_graph(10, 40, seed);
        VertexSet a, b;
        for (int v : g.verts) ((seed + v) % 3 == 0 ? a : b).push_back(v);
        long long brute = 0;
        for (int u : a)
            for (int v : b)
                if (g.has_edge(u, v)) ++brute;
        CHECK(edge_count_between(g, a, b) == brute);
    }
}

TEST_CASE("sorted-set helpers") {
    VertexSet a{1, 3, 5}, b{3, 4, 5};
    CHECK(set_union(a, b) == VertexSet{1, 3, 4, 5});
    CHECK(set_intersect(a, b) == VertexSet{3, 5});
    CHECK(set_minus(a, b) == VertexSet{1});
    CHECK(set_contains(a, 3));
    CHECK_FALSE(set_contains(a, 2));
}
