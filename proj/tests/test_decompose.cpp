#include "doctest.h"

#include <algorithm>

#include "test_support.hpp"
#include "treestab/cutdense.hpp"
#include "treestab/graph.hpp"
#include "treestab/oracle.hpp"

using namespace treestab;

namespace {

Q cut_density(const Graph& g, const VertexSet& a) {
    VertexSet b = set_minus(g.verts, a);
    REQUIRE(!a.empty());
    REQUIRE(!b.empty());
    return Q(Int(edge_count_between(g, a, b)), Int(a.size()) * Int(b.size()));
}

}  // namespace

TEST_CASE("decompose: the bridge between two triangles is deleted") {
    Graph g = Graph::make(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
    auto res = decompose(g, q_of(1, 2), /*seed=*/1);
    REQUIRE(res.deleted.size() == 1u);
    CHECK(res.deleted[0] == Edge{2, 3});
    REQUIRE(res.components.size() == 2u);
    for (const auto& comp : res.components) {
        CHECK(comp.order() == 3);
        CHECK(oracle::exact_min_cut_ratio(comp).density == q_of(1));
    }
    CHECK(res.heuristic_complete_all);
}

TEST_CASE("decompose: an already cut-dense graph loses nothing") {
    auto res = decompose(Graph::complete(8), q_of(1, 2), 1);
    CHECK(res.deleted.empty());
    REQUIRE(res.components.size() == 1u);
    CHECK(res.components[0].edge_count() == 28);
}

TEST_CASE("decompose property: deletion budget, density, edge partition") {
    for (unsigned long long seed = 1; seed <= 12; ++seed) {
        Graph g = testsup::random_graph(11, 35, seed);
        for (Q q : {q_of(1, 8), q_of(1, 4), q_of(1, 2)}) {
            auto res = decompose(g, q, seed);
            const Int n(g.order());
            CHECK(Q(Int(res.deleted.size())) <= q * n * n);

            EdgeSet rebuilt = res.deleted;
            for (const auto& comp : res.components) {
                if (comp.order() >= 2)
                    CHECK(oracle::exact_min_cut_ratio(comp).density >= q);
                rebuilt.insert(rebuilt.end(), comp.edges.begin(), comp.edges.end());
            }
            std::sort(rebuilt.begin(), rebuilt.end());
            CHECK(rebuilt == g.edges);  // exact partition, no edge lost or duplicated
        }
    }
}

TEST_CASE("decompose is deterministic for a fixed seed") {
    Graph g = testsup::random_graph(12, 30, 77);
    auto a = decompose(g, q_of(1, 4), 5);
    auto b = decompose(g, q_of(1, 4), 5);
    CHECK(a.deleted == b.deleted);
    REQUIRE(a.components.size() == b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i)
        CHECK(a.components[i].edges == b.components[i].edges);
}

TEST_CASE("find_violating_cut: present on the bridge graph, absent on K_4") {
    Graph bridged = Graph::make(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
    auto cut = find_violating_cut(bridged, q_of(1, 2), 1, Budgets{});
    REQUIRE(cut.has_value());
    CHECK(cut_density(bridged, *cut) < q_of(1, 2));

    CHECK_FALSE(find_violating_cut(Graph::complete(4), q_of(1), 1, Budgets{}).has_value());
}
