#include <benchmark/benchmark.h>

#include "cvpq/behaviors.hpp"
#include "cvpq/cfrd.hpp"

static void BM_expand_complex_product(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cvpq::expand_complex_product(m));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_expand_complex_product)->DenseRange(4, 16, 4);

static void BM_sign_counts_closed(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(cvpq::sign_counts_closed(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_sign_counts_closed)->Arg(16)->Arg(52);

static void BM_cfrd_evaluate_mmode(benchmark::State& state) {
    const auto b = cvpq::behavior_mmode(static_cast<std::size_t>(state.range(0)), 0.9, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(cvpq::cfrd_evaluate(b));
}
BENCHMARK(BM_cfrd_evaluate_mmode)->DenseRange(3, 12, 3);
