#include <benchmark/benchmark.h>

#include <random>

#include "cdbundle/equivalence.hpp"
#include "cdbundle/invariants.hpp"
#include "cdbundle/kernels.hpp"
#include "cdbundle/oracle.hpp"
#include "cdbundle/series.hpp"

using namespace cdbundle;

namespace {

MatrixPowerSeries2 random_series(int n, int order) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 0.3);
    MatrixPowerSeries2 s(n, order);
    for (int k = 0; k <= order; ++k)
        for (int l = 0; l <= order; ++l) {
            ComplexMatrix m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
            s.set(k, l, m);
        }
    s.add(0, 0, 2.0 * ComplexMatrix::Identity(n, n));
    return s;
}

void BM_SeriesMultiply(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    const auto a = random_series(3, order), b = random_series(3, order);
    for (auto _ : state) benchmark::DoNotOptimize(series_multiply(a, b));
}
BENCHMARK(BM_SeriesMultiply)->Arg(4)->Arg(8)->Arg(12);

void BM_SeriesInvert(benchmark::State& state) {
    const auto a = random_series(3, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(series_invert(a));
}
BENCHMARK(BM_SeriesInvert)->Arg(4)->Arg(8)->Arg(12);

void BM_Normalize(benchmark::State& state) {
    const auto k = kernel_taylor(KernelSpec::jet(1.0, 2.0, 2), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(normalize(k));
}
BENCHMARK(BM_Normalize)->Arg(4)->Arg(8);

void BM_InvariantsAtZero(benchmark::State& state) {
    const auto spec = KernelSpec::homogeneous(2.0, {1.0, 1.0, 1.0}, 2);
    for (auto _ : state) benchmark::DoNotOptimize(invariants_at_zero(kernel_taylor(spec, 6)));
}
BENCHMARK(BM_InvariantsAtZero);

void BM_OracleRichardson(benchmark::State& state) {
    const auto spec = KernelSpec::jet(1.0, 2.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(orthonormal_oracle_at(spec, cplx(0.2, 0.1)));
}
BENCHMARK(BM_OracleRichardson);

void BM_OracleCentral(benchmark::State& state) {
    const auto spec = KernelSpec::jet(1.0, 2.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(orthonormal_oracle_at(spec, cplx(0.2, 0.1), FDConfig::central()));
}
BENCHMARK(BM_OracleCentral);

void BM_PairDecider(benchmark::State& state) {
    const auto a = invariants_at_zero(kernel_taylor(
        KernelSpec::direct_sum({KernelSpec::bergman(1.0), KernelSpec::jet(1.0, 5.0, 1)}), 6));
    const auto b = invariants_at_zero(kernel_taylor(KernelSpec::jet(1.0, 2.0, 2), 6));
    for (auto _ : state) benchmark::DoNotOptimize(simultaneous_pair_equiv(a, b));
}
BENCHMARK(BM_PairDecider);

void BM_FullReport(benchmark::State& state) {
    const auto inner = KernelSpec::homogeneous(2.0, {1.0, 1.0, 1.0}, 2);
    const auto perm = KernelSpec::permuted({3, 1, 2}, inner);
    for (auto _ : state) benchmark::DoNotOptimize(full_report(inner, perm));
}
BENCHMARK(BM_FullReport);

}  // namespace

BENCHMARK_MAIN();
