#include <benchmark/benchmark.h>

#include "thzgeo/analytic.hpp"

using namespace thzgeo;

static void BM_ConditionalLt(benchmark::State& state) {
    NetworkParams p;
    const LtOptions opts{static_cast<int>(state.range(0)), false};
    for (auto _ : state) benchmark::DoNotOptimize(lt_thz_conditional({1e6, 0.0}, 5.0, p, opts));
}
BENCHMARK(BM_ConditionalLt)->Arg(1)->Arg(3)->Arg(8);

static void BM_AveragedLt(benchmark::State& state) {
    NetworkParams p;
    for (auto _ : state) benchmark::DoNotOptimize(lt_thz_average(1e6, p, {3, true}));
}
BENCHMARK(BM_AveragedLt)->Unit(benchmark::kMillisecond);

static void BM_AssociationQuadrature(benchmark::State& state) {
    NetworkParams p;
    for (auto _ : state) benchmark::DoNotOptimize(assoc_prob_thz_quadrature(p));
}
BENCHMARK(BM_AssociationQuadrature)->Unit(benchmark::kMicrosecond);

static void BM_AssociationSeries(benchmark::State& state) {
    NetworkParams p;
    p.lambda_t = 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(assoc_prob_thz_series(p));
}
BENCHMARK(BM_AssociationSeries)->Unit(benchmark::kMicrosecond);

static void BM_ThzCoverage(benchmark::State& state) {
    NetworkParams p;
    std::vector<double> tau(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = 0.1 * static_cast<double>(i + 1);
    for (auto _ : state) benchmark::DoNotOptimize(coverage_thz_only(p, tau));
}
BENCHMARK(BM_ThzCoverage)->Arg(1)->Arg(15)->Unit(benchmark::kMillisecond);

// Bias sweep on one evaluator: the conditional coverage is reused.
static void BM_CoexistingBiasSweep(benchmark::State& state) {
    NetworkParams p;
    for (auto _ : state) {
        CoexistingEvaluator eval(p, {{100.0, 100.0}});
        for (double b = 1e-4; b < 1e4; b *= 10.0) benchmark::DoNotOptimize(eval.evaluate(b));
    }
}
BENCHMARK(BM_CoexistingBiasSweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
