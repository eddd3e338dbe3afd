// Serial reference sweep against the OpenMP sweep on the same grid.

#include "lzlab/sweep.hpp"

#include <benchmark/benchmark.h>

namespace {

lzlab::ExperimentConfig bench_config()
{
    return lzlab::parse_config(nlohmann::json::parse(R"({
        "potential": {"family": "preset", "params": {"name": "one_zero"}},
        "sweep": {"h": {"min": 0.02, "max": 0.08, "count": 4}, "mu": {"min": 0.01, "max": 0.08, "count": 4, "log": true}},
        "zero_runtime": true
    })"));
}

void BM_SweepSerial(benchmark::State& state)
{
    const auto cfg = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(lzlab::run_sweep_serial(cfg));
}

void BM_SweepParallel(benchmark::State& state)
{
    const auto cfg = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(lzlab::run_sweep_parallel(cfg, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
