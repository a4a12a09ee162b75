#include "shorttopics/cluster.hpp"
#include "shorttopics/embedding.hpp"
#include "shorttopics/reduce.hpp"
#include "shorttopics/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace st = shorttopics;

namespace {

st::Matrix random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    st::Matrix x(n, d);
    for (auto& v : x.data()) v = g(rng);
    return x;
}

void BM_CoreDistances(benchmark::State& state) {
    const auto x = random_points(static_cast<std::size_t>(state.range(0)), 20, 1);
    for (auto _ : state) benchmark::DoNotOptimize(st::core_distances(x, 5));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoreDistances)->RangeMultiplier(2)->Range(512, 4096)->Complexity(benchmark::oNSquared);

void BM_MinimumSpanningTree(benchmark::State& state) {
    const auto x = random_points(static_cast<std::size_t>(state.range(0)), 20, 2);
    const auto core = st::core_distances(x, 5);
    for (auto _ : state) benchmark::DoNotOptimize(st::minimum_spanning_tree(x, core));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinimumSpanningTree)->RangeMultiplier(2)->Range(512, 4096)->Complexity(benchmark::oNSquared);

void BM_ClusterHierarchy(benchmark::State& state) {
    const auto x = random_points(static_cast<std::size_t>(state.range(0)), 20, 3);
    const st::ClusterConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(st::build_cluster_hierarchy(x, cfg));
}
BENCHMARK(BM_ClusterHierarchy)->Arg(1000)->Arg(4000);

void BM_Pca(benchmark::State& state) {
    const auto x = random_points(5000, static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(st::pca(x, 100));
}
BENCHMARK(BM_Pca)->Arg(200)->Arg(300);

void BM_EmbedInquiries(benchmark::State& state) {
    const auto data = st::generate_synthetic_corpus(10, 200, 5);
    st::SyntheticEmbeddingOptions eo;
    eo.dim = 200;
    const auto store = st::synthetic_embeddings(data, eo);
    std::vector<st::TokenizedInquiry> tokenized;
    for (const auto& q : data.corpus.inquiries) tokenized.push_back({q.id, st::tokenize_lemmatize(q.text), 0});
    for (auto _ : state) {
        for (const auto& t : tokenized) benchmark::DoNotOptimize(st::embed_inquiry(t, store));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tokenized.size()));
}
BENCHMARK(BM_EmbedInquiries);

} // namespace
BENCHMARK_MAIN();
