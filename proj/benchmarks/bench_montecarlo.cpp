#include <vector>

#include <benchmark/benchmark.h>

#include "cvpq/behaviors.hpp"
#include "cvpq/montecarlo.hpp"

static void BM_estimate_moment(benchmark::State& state) {
    const auto measure = cvpq::signed_center_mixture(3, 1.0, 0.3, cvpq::Parity::Odd);
    const std::vector<unsigned> exps{2, 1, 1};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cvpq::estimate_moment(measure, exps, n, 7, {.workers = 1}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_estimate_moment)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
