#include <benchmark/benchmark.h>

#include "cvpq/scan.hpp"

static void BM_classify_point(benchmark::State& state) {
    const auto engine = static_cast<cvpq::Engine>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(cvpq::classify_point(3, cvpq::Family::MMode, 0.9, 0.1, 0.5, engine));
}
BENCHMARK(BM_classify_point)
    ->Arg(static_cast<int>(cvpq::Engine::ClosedForm))
    ->Arg(static_cast<int>(cvpq::Engine::Generic));

// Default 151 x 101 grid, single worker.
static void BM_scan_region(benchmark::State& state) {
    cvpq::ScanConfig cfg;
    cfg.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(cvpq::scan_region(cfg));
}
BENCHMARK(BM_scan_region)->Unit(benchmark::kMillisecond);
