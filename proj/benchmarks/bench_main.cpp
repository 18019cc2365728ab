// Microbenchmarks for the three hot kernels: exact cut enumeration (the
// 2^(n-1) bound everything else leans on), the flow-based certifier, and the
// containment oracle that audits every embedding claim.

#include <benchmark/benchmark.h>

#include "treestab/cutdense.hpp"
#include "treestab/graph.hpp"
#include "treestab/oracle.hpp"
#include "treestab/rng.hpp"
#include "treestab/tree.hpp"

namespace {

using namespace treestab;

Graph dense_instance(int n, std::uint64_t seed) {
    Rng rng(seed);
    EdgeSet edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.chance(q_of(3, 5))) edges.push_back({u, v});
    return Graph::make(n, edges);
}

void BM_exact_cut_density(benchmark::State& state) {
    const Graph g = dense_instance(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_cut_density(g, 22));
    }
}
BENCHMARK(BM_exact_cut_density)->DenseRange(10, 18, 4);

void BM_flow_certify(benchmark::State& state) {
    const Graph g = dense_instance(static_cast<int>(state.range(0)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow_certify(g));
    }
}
BENCHMARK(BM_flow_certify)->DenseRange(12, 48, 12);

void BM_contains_tree(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Graph g = dense_instance(n, 13);
    const RootedTree t = RootedTree::path_tree(n / 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::contains_tree(g, t));
    }
}
BENCHMARK(BM_contains_tree)->DenseRange(12, 24, 6);

}  // namespace

BENCHMARK_MAIN();
