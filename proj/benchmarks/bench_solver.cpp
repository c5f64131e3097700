#include <benchmark/benchmark.h>

#include "vargc/baselines.hpp"
#include "vargc/design.hpp"
#include "vargc/simulate.hpp"
#include "vargc/ss_admm.hpp"
#include "vargc/ssd_admm.hpp"

namespace {

vargc::GroundTruth make_series(Eigen::Index n, std::uint64_t seed) {
    vargc::SimConfig cfg;
    cfg.orders = {4, 3, 2, 4};
    cfg.n_samples = n;
    cfg.measurement_var = 0.1;
    cfg.seed = seed;
    return vargc::assemble_observation(cfg);
}

// Fixed iteration count (tol too small to trigger) so every benchmark run
// performs identical work and the number reads as cost per solver sweep.
vargc::HyperParams fixed_iters(int iters) {
    vargc::HyperParams hp;
    hp.lambda = 0.05;
    hp.gamma = 1.0;
    hp.kappa = 0.5;
    hp.max_iters = iters;
    hp.tol = 1e-300;
    return hp;
}

void BM_BuildLagDesign(benchmark::State& state) {
    const vargc::GroundTruth g = make_series(state.range(0), 11);
    const int m_bar = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::build_lag_design(g.observed, m_bar));
}
BENCHMARK(BM_BuildLagDesign)->Args({500, 10})->Args({942, 30});

void BM_FitUnrestricted(benchmark::State& state) {
    const vargc::GroundTruth g = make_series(state.range(0), 12);
    const vargc::LagDesign d =
        vargc::build_lag_design(g.observed, static_cast<int>(state.range(1)));
    const vargc::HyperParams hp = fixed_iters(100);
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::fit_unrestricted(d, hp));
}
BENCHMARK(BM_FitUnrestricted)
    ->Args({500, 10})
    ->Args({942, 30})
    ->Unit(benchmark::kMillisecond);

void BM_FitDenoise(benchmark::State& state) {
    const vargc::GroundTruth g = make_series(state.range(0), 13);
    const vargc::LagDesign d =
        vargc::build_lag_design(g.observed, static_cast<int>(state.range(1)));
    const vargc::HyperParams hp = fixed_iters(100);
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::fit_denoise(d, hp));
}
BENCHMARK(BM_FitDenoise)
    ->Args({500, 10})
    ->Args({942, 30})
    ->Unit(benchmark::kMillisecond);

void BM_TvDenoise(benchmark::State& state) {
    const vargc::GroundTruth g = make_series(state.range(0), 14);
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::tv_denoise(g.observed, 0.3));
}
BENCHMARK(BM_TvDenoise)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_OlsFit(benchmark::State& state) {
    const vargc::GroundTruth g = make_series(state.range(0), 15);
    const vargc::LagDesign d =
        vargc::build_lag_design(g.observed, static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(vargc::ols_fit(d));
}
BENCHMARK(BM_OlsFit)->Args({500, 10})->Args({942, 30});

}  // namespace

BENCHMARK_MAIN();
