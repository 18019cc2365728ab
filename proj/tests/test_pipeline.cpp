#include "doctest.h"

#include <algorithm>
#include <string>

#include "test_support.hpp"
#include "treestab/graph.hpp"
#include "treestab/pipeline.hpp"
#include "treestab/rational.hpp"
#include "treestab/tree.hpp"
#include "treestab/tree_embed.hpp"

using namespace treestab;

namespace {

bool saw_stage(const StructureResult& res, const std::string& name) {
    return std::any_of(res.stage_log.begin(), res.stage_log.end(),
                       [&name](const StageEntry& e) { return e.stage == name; });
}

}  // namespace

TEST_CASE("hyperstability: degenerate trees return immediately") {
    ParamHierarchy params;
    auto one = hyperstability(Graph::complete(3), RootedTree::path_tree(1), params);
    CHECK(one.outcome == Outcome::EmbeddingFound);
    REQUIRE(one.embedding.has_value());
    CHECK(validate_embedding(*one.embedding));
    CHECK(saw_stage(one, "degenerate"));

    auto two = hyperstability(Graph::cycle_graph(3), RootedTree::path_tree(2), params);
    CHECK(two.outcome == Outcome::EmbeddingFound);
    REQUIRE(two.embedding.has_value());
    CHECK(validate_embedding(*two.embedding));
}

TEST_CASE("hyperstability: dense hosts take the shortcut") {
    ParamHierarchy params;
    // e(K_30) = 435 > 2 * 7 * 30 = 420.
    auto res = hyperstability(Graph::complete(30), RootedTree::path_tree(7), params);
    CHECK(res.outcome == Outcome::EmbeddingFound);
    REQUIRE(res.embedding.has_value());
    CHECK(validate_embedding(*res.embedding));
    CHECK(saw_stage(res, "dense-shortcut"));
    // The stage log survives the embedding exit (the defaults also trip the
    // advisory hierarchy check, which lands in the log first).
    CHECK(saw_stage(res, "params"));
}

TEST_CASE("hyperstability: four cliques too small for the path certify") {
    Graph g = testsup::clique_blocks(4, 5);
    RootedTree t = RootedTree::path_tree(6);
    ParamHierarchy params;
    auto res = hyperstability(g, t, params);

    CHECK(res.outcome == Outcome::Certificate);
    REQUIRE(res.certificate.has_value());
    const DeletionCertificate& cert = *res.certificate;
    CHECK(cert.components.size() == 4u);
    for (const auto& cc : cert.components) CHECK(cc.cover.size() <= 4u);

    auto audit = validate_certificate(g, t, cert, /*check_t_freeness=*/true);
    const std::string first_reason = audit.reasons.empty() ? "" : audit.reasons.front();
    CHECK_MESSAGE(audit.pass, first_reason);
    CHECK(audit.warnings.empty());  // no five-vertex chunk contains a six-vertex path
    CHECK(audit.max_cover <= 4);
    CHECK(audit.cover_target == q_of(5, 2) * Int(6));
    // |deleted| <= eps d n = 60 with lots of slack.
    CHECK(audit.deleted_vs_target <= 0);
}

TEST_CASE("hyperstability: an edgeless host yields an empty certificate") {
    ParamHierarchy params;
    auto res = hyperstability(Graph::empty_graph(5), RootedTree::path_tree(3), params);
    CHECK(res.outcome == Outcome::Certificate);
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->deleted_edges.empty());
    CHECK(res.certificate->components.empty());
    auto audit = validate_certificate(Graph::empty_graph(5), RootedTree::path_tree(3),
                                      *res.certificate);
    CHECK(audit.pass);
}

TEST_CASE("hyperstability is deterministic for fixed params") {
    Graph g = testsup::clique_blocks(4, 5);
    RootedTree t = RootedTree::path_tree(6);
    ParamHierarchy params;
    params.seed = 12;
    auto a = hyperstability(g, t, params);
    auto b = hyperstability(g, t, params);
    CHECK(a.outcome == b.outcome);
    REQUIRE(a.certificate.has_value());
    REQUIRE(b.certificate.has_value());
    CHECK(a.certificate->deleted_edges == b.certificate->deleted_edges);
    CHECK(a.certificate->components.size() == b.certificate->components.size());
}

TEST_CASE("validate_certificate rejects each tampering class") {
    Graph g = testsup::clique_blocks(4, 5);
    RootedTree t = RootedTree::path_tree(6);
    ParamHierarchy params;
    auto res = hyperstability(g, t, params);
    REQUIRE(res.certificate.has_value());
    const DeletionCertificate& cert = *res.certificate;
    REQUIRE(validate_certificate(g, t, cert).pass);
    REQUIRE(!cert.deleted_edges.empty());

    SUBCASE("duplicate deleted edge") {
        DeletionCertificate bad = cert;
        bad.deleted_edges.push_back(bad.deleted_edges.front());
        std::sort(bad.deleted_edges.begin(), bad.deleted_edges.end());
        auto audit = validate_certificate(g, t, bad);
        CHECK_FALSE(audit.pass);
        CHECK_FALSE(audit.reasons.empty());
    }
    SUBCASE("deleting a non-edge") {
        DeletionCertificate bad = cert;
        bad.deleted_edges.push_back({0, 6});  // crosses two cliques
        std::sort(bad.deleted_edges.begin(), bad.deleted_edges.end());
        CHECK_FALSE(validate_certificate(g, t, bad).pass);
    }
    SUBCASE("accounting out of balance") {
        DeletionCertificate bad = cert;
        bad.accounting.sparse_edges += 1;
        CHECK_FALSE(validate_certificate(g, t, bad).pass);
    }
    SUBCASE("emptied cover") {
        DeletionCertificate bad = cert;
        REQUIRE(!bad.components.empty());
        bad.components[0].cover.clear();
        CHECK_FALSE(validate_certificate(g, t, bad).pass);
    }
    SUBCASE("component claims an edge that was deleted") {
        DeletionCertificate bad = cert;
        REQUIRE(!bad.components.empty());
        Edge stolen = bad.deleted_edges.front();
        bad.components[0].component.edges.push_back(stolen);
        std::sort(bad.components[0].component.edges.begin(),
                  bad.components[0].component.edges.end());
        CHECK_FALSE(validate_certificate(g, t, bad).pass);
    }
}

TEST_CASE("validate_certificate flags components that still contain the tree") {
    Graph g = testsup::clique_blocks(4, 5);
    ParamHierarchy params;
    auto res = hyperstability(g, RootedTree::path_tree(6), params);
    REQUIRE(res.certificate.has_value());
    // Audit the same certificate against a three-vertex path: the chunks
    // certainly contain one, so the exactness warning must fire.
    auto audit = validate_certificate(g, RootedTree::path_tree(3), *res.certificate,
                                      /*check_t_freeness=*/true);
    CHECK_FALSE(audit.warnings.empty());
}
