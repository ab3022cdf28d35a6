// Serial against OpenMP execution of the optimizer's linearization, a full
// window solve, and an ensemble of independent runs.

#include "fgins/pipeline.hpp"
#include "fgins/scenario.hpp"

#include "support.hpp"

#include <benchmark/benchmark.h>

using namespace fgins;
using namespace fgins::testing;

namespace {

const SyntheticRun& shared_run() {
    static const ImuNoiseModel noise = nominal_noise();
    static const SyntheticRun run = synthetic_run(230.0, &noise, 17);
    return run;
}

Execution exec_of(const benchmark::State& state) { return state.range(1) ? Execution::Parallel : Execution::Serial; }

void BM_Linearize(benchmark::State& state) {
    WindowConfig cfg;
    cfg.size = static_cast<int>(state.range(0));
    cfg.marginalize = false;
    const SlidingWindow w = run_window(shared_run(), cfg, nominal_noise(), static_cast<int>(state.range(0)));
    const Execution exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(w.graph().linearize(exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(w.graph().imu_factors().size()));
}
BENCHMARK(BM_Linearize)->ArgsProduct({{20, 200}, {0, 1}})->ArgNames({"nodes", "omp"})->Unit(benchmark::kMicrosecond);

void BM_WindowSolve(benchmark::State& state) {
    WindowConfig cfg;
    cfg.size = static_cast<int>(state.range(0));
    cfg.solver.exec = exec_of(state);
    const ImuNoiseModel noise = nominal_noise();
    for (auto _ : state) benchmark::DoNotOptimize(run_window(shared_run(), cfg, noise, 60).latest());
}
BENCHMARK(BM_WindowSolve)->ArgsProduct({{20, 100}, {0, 1}})->ArgNames({"nodes", "omp"})->Unit(benchmark::kMillisecond);

// Independent EKF runs over different seeds, the shape used by the CLI's
// grade comparison and tuning grid.
void BM_Ensemble(benchmark::State& state) {
    const int n = 8;
    std::vector<Dataset> data;
    for (int i = 0; i < n; ++i) {
        data.push_back(simulate(simulation_from(
            Config::parse("duration = 200\nstatic_time = 10\noutage_passes = 120\nseed = " + std::to_string(i + 1)))));
    }
    RunConfig cfg;
    cfg.mode = Mode::M0;
    cfg.noise = from_datasheet(grade_preset("adis16465"));
    cfg.outage_passes = {120.0};
    const bool parallel = state.range(0) != 0;
    for (auto _ : state) {
        std::vector<double> rmse(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (int i = 0; i < n; ++i) rmse[i] = run_mode(cfg, data[i]).report.rmse_horizontal;
        benchmark::DoNotOptimize(rmse);
    }
}
BENCHMARK(BM_Ensemble)->Arg(0)->Arg(1)->ArgNames({"omp"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
