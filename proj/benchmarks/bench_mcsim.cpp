#include <benchmark/benchmark.h>

#include "thzgeo/mcsim.hpp"

using namespace thzgeo;

static void BM_PppRadii(benchmark::State& state) {
    const double intensity = static_cast<double>(state.range(0)) * 1e-3;
    Rng rng = trial_rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_ppp_radii(intensity, 100.0, rng));
}
BENCHMARK(BM_PppRadii)->Arg(10)->Arg(32)->Arg(100);

static void BM_Trial(benchmark::State& state) {
    NetworkParams p;
    McConfig mc;
    mc.rule = static_cast<AssociationRule>(state.range(0));
    std::int64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trial(p, mc, i++));
}
BENCHMARK(BM_Trial)
    ->Arg(static_cast<int>(AssociationRule::nearest_thz))
    ->Arg(static_cast<int>(AssociationRule::brsp))
    ->Arg(static_cast<int>(AssociationRule::hybrid));

static void BM_CoverageEstimate(benchmark::State& state) {
    NetworkParams p;
    McConfig mc;
    mc.trials = state.range(0);
    mc.rule = AssociationRule::nearest_thz;
    const Thresholds tau{100.0, 100.0};
    for (auto _ : state) benchmark::DoNotOptimize(estimate_coverage(p, mc, tau));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoverageEstimate)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
