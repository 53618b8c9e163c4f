#include <benchmark/benchmark.h>

#include "clsel/experiments.hpp"
#include "clsel/logic_fit.hpp"
#include "clsel/scores.hpp"
#include "clsel/selection.hpp"
#include "clsel/simgen.hpp"

using namespace clsel;

namespace {

Dataset scenario3(std::size_t n, std::size_t p) {
    return sim::generate(sim::builtin_scenario(3, n, p, 11));
}

void BM_Scores(benchmark::State& state) {
    const Dataset d = scenario3(static_cast<std::size_t>(state.range(0)),
                                static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_scores(d));
}
BENCHMARK(BM_Scores)->Args({60, 1000})->Args({60, 6000})->Args({600, 1000})
    ->Unit(benchmark::kMillisecond);

void BM_Select(benchmark::State& state) {
    const Dataset d = scenario3(60, 1000);
    const auto scores = compute_scores(d);
    SelectionSpec spec;
    spec.criterion = static_cast<Criterion>(state.range(0));
    spec.k = 246;
    for (auto _ : state) benchmark::DoNotOptimize(select(d, scores, spec));
    state.SetLabel(to_string(spec.criterion));
}
BENCHMARK(BM_Select)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_Anneal(benchmark::State& state) {
    const Dataset d = scenario3(60, static_cast<std::size_t>(state.range(0)));
    logic::AnnealParams params;
    params.iterations = 20'000;
    params.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(logic::anneal_fit(d, params));
}
BENCHMARK(BM_Anneal)->Arg(246)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ReplicateSuccess(benchmark::State& state) {
    exp::ExperimentConfig c;
    c.replicates = 4;
    for (auto _ : state) benchmark::DoNotOptimize(exp::run_success_study(c));
}
BENCHMARK(BM_ReplicateSuccess)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
