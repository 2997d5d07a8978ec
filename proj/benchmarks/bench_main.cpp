#include <benchmark/benchmark.h>

#include "latcount/cartan.hpp"
#include "latcount/enumerate.hpp"
#include "latcount/haar.hpp"
#include "latcount/rates.hpp"

using namespace latcount;

static void BM_NormBallCount(benchmark::State& state) {
    int64_t R = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(norm_ball_count(R));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(norm_ball_count(R)));
}
BENCHMARK(BM_NormBallCount)->RangeMultiplier(10)->Range(1000, 1000000);

static void BM_NormBallList(benchmark::State& state) {
    int64_t R = state.range(0);
    for (auto _ : state) {
        uint64_t n = 0;
        norm_ball_list(R, [&](const IntMat&) { ++n; });
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_NormBallList)->RangeMultiplier(10)->Range(1000, 100000);

static void BM_CartanDecompose(benchmark::State& state) {
    IntMat m = IntMat::identity(2);
    for (int i = 0; i < 14; ++i) m = multiply(m, IntMat::sl2(2, 1, 1, 1));
    Mat2 g = Mat2::from(m);
    for (auto _ : state) benchmark::DoNotOptimize(cartan_decompose(g));
}
BENCHMARK(BM_CartanDecompose);

static void BM_HaarSample(benchmark::State& state) {
    DomainSpec ball = DomainSpec::hyperbolic_ball(8.0);
    uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(haar::sample_one(ball, 1, i++));
}
BENCHMARK(BM_HaarSample);

static void BM_HarishChandra(benchmark::State& state) {
    double s = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(rates::harish_chandra_real(s));
}
BENCHMARK(BM_HarishChandra)->Arg(1)->Arg(10)->Arg(80);

static void BM_AdelicPartialProduct(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(rates::adelic_hc_partial_product(4.5, state.range(0)));
}
BENCHMARK(BM_AdelicPartialProduct)->Arg(10000)->Arg(100000);

static void BM_Sl3Ball(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sl3_ball_count(state.range(0)));
}
BENCHMARK(BM_Sl3Ball)->Arg(10)->Arg(30);

BENCHMARK_MAIN();
