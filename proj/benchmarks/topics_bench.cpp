#include <benchmark/benchmark.h>

#include <random>

#include "leadnet/synth.hpp"
#include "leadnet/topics.hpp"

namespace leadnet {
namespace {

UndirectedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution edge(p);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (edge(rng)) {
                edges.emplace_back(a, b);
            }
        }
    }
    return UndirectedGraph::from_edges(n, edges);
}

void BM_BronKerbosch(benchmark::State& state) {
    const UndirectedGraph g = random_graph(static_cast<std::size_t>(state.range(0)), 0.3, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bron_kerbosch(g));
    }
}
BENCHMARK(BM_BronKerbosch)->Arg(50)->Arg(100)->Arg(200);

void BM_TopicsInWindow(benchmark::State& state) {
    SyntheticSpec spec;
    spec.n_threads = static_cast<std::size_t>(state.range(0));
    const Corpus corpus = generate(spec);
    const ConceptLexicon lexicon = bundled_lexicon();
    const WindowSlice slice = whole_corpus(corpus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(topics_in_window(slice, lexicon, TopicConfig{}));
    }
}
BENCHMARK(BM_TopicsInWindow)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace leadnet
