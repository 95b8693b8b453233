#include <benchmark/benchmark.h>

#include "rtpol/forest.hpp"
#include "rtpol/partition.hpp"
#include "rtpol/polarization.hpp"
#include "rtpol/random.hpp"
#include "rtpol/sampler.hpp"
#include "rtpol/synthetic.hpp"

using namespace rtpol;

namespace {

RetweetNetwork er(std::int64_t nodes) {
    return synth::erdos_renyi(static_cast<std::size_t>(nodes), static_cast<std::size_t>(4 * nodes), 1);
}

void BM_Bisect(benchmark::State& state) {
    const RetweetNetwork g = er(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(bisect(g, seed++));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_Bisect)->Arg(500)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_Rewire(benchmark::State& state) {
    const RetweetNetwork g = er(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rewire_null(g, seed++));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(10 * g.edge_count()));
}
BENCHMARK(BM_Rewire)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_NormalizedScore(benchmark::State& state) {
    const RetweetNetwork g = er(state.range(0));
    PolarizationConfig cfg;
    cfg.samples = 10;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(normalized_score(g, seed++, cfg));
}
BENCHMARK(BM_NormalizedScore)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DrawSample(benchmark::State& state) {
    synth::StreamParams p;
    p.tweets = 20000;
    const TopicDataset d = synth::generate_stream(p, "seed", "sub", Genre::Politics, 0, "t", "u", 3);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(draw_sample(d, {static_cast<std::size_t>(state.range(0)), 100, seed++}));
}
BENCHMARK(BM_DrawSample)->Arg(10)->Arg(320);

void BM_FitForest(benchmark::State& state) {
    Rng rng(5);
    Matrix x;
    std::vector<double> y;
    for (std::int64_t i = 0; i < state.range(0); ++i) {
        std::vector<double> row(5);
        for (double& v : row) v = rng.uniform();
        y.push_back(row[0] + (row[1] > 0.5 ? 0.3 : 0.0));
        x.push_back(std::move(row));
    }
    ForestConfig cfg;
    cfg.trees = 50;
    for (auto _ : state) benchmark::DoNotOptimize(fit_forest(x, y, {"a", "b", "c", "d", "e"}, cfg));
}
BENCHMARK(BM_FitForest)->Arg(600)->Arg(6000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
