#include <benchmark/benchmark.h>

#include "thzgeo/interference.hpp"
#include "thzgeo/specfun.hpp"

using namespace thzgeo;

static void BM_ExpIntegral(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp_integral_en(static_cast<int>(state.range(0)), x));
        x = x < 30.0 ? x * 1.01 : 0.37;
    }
}
BENCHMARK(BM_ExpIntegral)->Arg(1)->Arg(5)->Arg(40);

static void BM_ParabolicCylinder(benchmark::State& state) {
    const double nu = static_cast<double>(state.range(0)) / 2.0;
    double z = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(parabolic_cylinder_dneg(nu, z));
        z = z < 12.0 ? z + 0.37 : -3.0;
    }
}
BENCHMARK(BM_ParabolicCylinder)->Arg(1)->Arg(7)->Arg(40);

static void BM_LambertW(benchmark::State& state) {
    std::complex<double> z(0.3, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambert_w0(z));
        z = z.real() < 1e6 ? z * 1.7 : std::complex<double>(0.3, 0.0);
    }
}
BENCHMARK(BM_LambertW);

static void BM_InterferenceCdf(benchmark::State& state) {
    const InterferenceShape shape(2.0);
    const std::vector<double> w{0.05, 0.2, 0.8, 3.0};
    const double c = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(interference_cdf(shape, c, w));
}
BENCHMARK(BM_InterferenceCdf)->Arg(3)->Arg(30)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
