#include "doctest.h"

#include <algorithm>
#include <string>

#include "test_support.hpp"
#include "treestab/errors.hpp"
#include "treestab/graph.hpp"
#include "treestab/tree.hpp"
#include "treestab/tree_embed.hpp"

using namespace treestab;

TEST_CASE("validate_embedding catches every defect class") {
    Graph host = Graph::path_graph(4);
    RootedTree t = RootedTree::path_tree(3);

    Embedding good{t, host, {1, 2, 3, -1}};
    std::string why;
    CHECK(validate_embedding(good, std::nullopt, &why));
    CHECK(validate_embedding(good, 1, &why));       // anchored at the root image
    CHECK_FALSE(validate_embedding(good, 2, &why)); // wrong anchor
    Embedding unmapped{t, host, {1, 2, -1, -1}};
    CHECK_FALSE(validate_embedding(unmapped, std::nullopt, &why));
    Embedding repeat{t, host, {1, 2, 1, -1}};
    CHECK_FALSE(validate_embedding(repeat, std::nullopt, &why));
    Embedding nonedge{t, host, {0, 1, 3, -1}};      // 1-3 is not a host edge
    CHECK_FALSE(validate_embedding(nonedge, std::nullopt, &why));
    CHECK_FALSE(why.empty());
}

TEST_CASE("greedy_embed: guaranteed regime on a clique") {
    // K_7 gives delta(g - anchor) = 5 >= e(t) and deg(anchor) = 6 >= Delta(t),
    // so the attempt is guaranteed for any 5-edge tree.
    Graph k7 = Graph::complete(7);
    for (int shape = 0; shape < 2; ++shape) {
        RootedTree t = shape == 0 ? RootedTree::path_tree(6) : RootedTree::star_tree(5);
        auto res = greedy_embed(k7, t, /*anchor=*/0);
        CHECK(res.guaranteed);
        REQUIRE(res.embedding.has_value());
        CHECK(validate_embedding(*res.embedding, 0));
    }
}

TEST_CASE("greedy_embed: failure names the starved vertex") {
    // A 4-leaf star cannot anchor at a path's interior vertex of degree 2.
    auto res = greedy_embed(Graph::path_graph(5), RootedTree::star_tree(4), 2);
    CHECK_FALSE(res.guaranteed);
    CHECK_FALSE(res.embedding.has_value());
    CHECK_FALSE(res.failure.empty());
}

TEST_CASE("greedy_embed can succeed below the guarantee threshold") {
    // Path into path: the degree premises fail but the embedding exists.
    auto res = greedy_embed(Graph::path_graph(5), RootedTree::path_tree(5), 0);
    CHECK_FALSE(res.guaranteed);
    REQUIRE(res.embedding.has_value());
    CHECK(validate_embedding(*res.embedding, 0));
}

TEST_CASE("split_tree: the ten-vertex path at lambda = 3/10") {
    RootedTree t = RootedTree::path_tree(10);
    auto split = split_tree(t, q_of(3, 10), /*delta_cap=*/2);
    // |Q| inside [(1-2*lambda)n, (1-lambda)n + 2*Delta] = [4, 11].
    CHECK(split.q_subtree.order() >= 4);
    CHECK(split.q_subtree.order() <= 11);
    CHECK(split.q_subtree.has_vertex(t.root));
    CHECK(split.components.size() <= 2u);
    for (const auto& comp : split.components)
        CHECK(Q(Int(comp.order())) <= q_of(3, 10) * Int(10));
}

TEST_CASE("split_tree property: bounds, partition, externals") {
    for (unsigned long long seed = 1; seed <= 12; ++seed) {
        RootedTree t = testsup::random_tree(18, 4, seed);
        for (Q lambda : {q_of(1, 10), q_of(3, 10), q_of(1, 2)}) {
            auto split = split_tree(t, lambda, /*delta_cap=*/4);
            const Int n(t.order());
            CHECK(Q(Int(split.q_subtree.order())) >= (Q(1) - Q(2) * lambda) * n);
            CHECK(Q(Int(split.q_subtree.order())) <= (Q(1) - lambda) * n + Q(8));
            CHECK(split.q_subtree.has_vertex(t.root));
            CHECK(split.components.size() <= 4u);

            // Q and the components partition the vertex set.
            VertexSet all = split.q_subtree.verts;
            for (const auto& comp : split.components) {
                CHECK(Q(Int(comp.order())) <= lambda * n);
                for (int v : comp.verts) {
                    CHECK_FALSE(set_contains(all, v));
                    all.push_back(v);
                    std::sort(all.begin(), all.end());
                }
            }
            CHECK(all == t.verts);

            // Each external vertex joins its component to Q by a tree edge.
            REQUIRE(split.externals.size() == split.components.size());
            for (std::size_t i = 0; i < split.components.size(); ++i) {
                int x = split.externals[i];
                CHECK(split.components[i].has_vertex(x));
                CHECK(split.q_subtree.has_vertex(t.parent[x]));
            }
        }
    }
}

TEST_CASE("external_vertices: root-only prefix of a path") {
    RootedTree t = RootedTree::path_tree(4);
    RootedTree sub = t.restricted_to({0}, 0);
    auto ext = external_vertices(t, sub);
    REQUIRE(ext.size() == 1u);
    CHECK(ext[0].first == 1);
    CHECK(ext[0].second.order() == 3);
    CHECK(ext[0].second.root == 1);
}

TEST_CASE("external_vertices property: bijection with components") {
    for (unsigned long long seed = 1; seed <= 10; ++seed) {
        RootedTree t = testsup::random_tree(14, 4, seed);
        // Take the subtree spanned by the root's first two BFS levels.
        VertexSet keep;
        for (int v : t.verts)
            if (t.depth(v) <= 1) keep.push_back(v);
        RootedTree sub = t.restricted_to(keep, t.root);
        auto ext = external_vertices(t, sub);
        VertexSet seen;
        std::size_t total = sub.verts.size();
        for (const auto& [x, comp] : ext) {
            CHECK(comp.has_vertex(x));
            CHECK(sub.has_vertex(t.parent[x]));  // x hangs off the subtree
            for (int v : comp.verts) {
                CHECK_FALSE(set_contains(seen, v));
                seen.push_back(v);
                std::sort(seen.begin(), seen.end());
            }
            total += comp.verts.size();
        }
        CHECK(total == t.verts.size());
    }
}

TEST_CASE("combine_embeddings: path split by hand, then a forced collision") {
    Graph host = Graph::path_graph(4);
    RootedTree t = RootedTree::path_tree(4);
    RootedTree comp = t.subtree_at(2);

    // The base carries the whole target tree with a partial image; parts
    // fill in the components.
    Embedding base{t, host, {0, 1, -1, -1}};
    Embedding part{comp, host, {-1, -1, 2, 3}};
    Embedding whole = combine_embeddings(base, {part});
    CHECK(validate_embedding(whole));
    for (int v = 0; v < 4; ++v) CHECK(whole.at(v) == v);

    // A part that reuses a base host vertex must be rejected by name.
    Embedding clash{comp, host, {-1, -1, 1, 0}};
    CHECK_THROWS_AS(combine_embeddings(base, {clash}), ValidationError);
}

TEST_CASE("connector_tree: reaching the far side of two glued cliques") {
    // K_12 on 0..11 and K_12 on 6..17 share six vertices; from anchor 0 the
    // first layer is adjacent to all of u = {12..17}.
    EdgeSet edges;
    for (int u = 0; u < 12; ++u)
        for (int v = u + 1; v < 12; ++v) edges.push_back({u, v});
    for (int u = 6; u < 18; ++u)
        for (int v = u + 1; v < 18; ++v) edges.push_back({u, v});
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Graph g = Graph::make(18, edges);
    VertexSet u{12, 13, 14, 15, 16, 17};

    auto ct = connector_tree(g, /*anchor=*/0, u, /*delta_cap=*/2, q_of(1, 2));
    REQUIRE(ct.ok);
    CHECK(ct.height >= 1);
    CHECK(validate_embedding(ct.embedding, 0));
    // Every leaf of the perfect tree lands inside u.
    for (int v : ct.tree.verts)
        if (ct.tree.children[v].empty()) CHECK(set_contains(u, ct.embedding.at(v)));
    for (int target : ct.leaf_targets) CHECK(set_contains(u, target));
}

TEST_CASE("expander_embed: dense host succeeds, starved host reports") {
    auto good = expander_embed(Graph::complete(30), testsup::random_tree(10, 3, 4), 3);
    REQUIRE(good.embedding.has_value());
    CHECK(validate_embedding(*good.embedding));

    auto bad = expander_embed(Graph::path_graph(4), RootedTree::star_tree(3), 3);
    CHECK_FALSE(bad.embedding.has_value());
    CHECK_FALSE(bad.failure.empty());
}
