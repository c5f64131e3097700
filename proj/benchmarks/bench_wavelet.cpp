#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "vargc/wavelet.hpp"

namespace {

Eigen::VectorXd random_signal(Eigen::Index n) {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = gauss(rng);
    return s;
}

void BM_Dwt(benchmark::State& state) {
    const Eigen::VectorXd s = random_signal(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(vargc::dwt(s, 4));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dwt)->Arg(512)->Arg(942)->Arg(4096);

void BM_Idwt(benchmark::State& state) {
    const vargc::WaveletCoeffs wc = vargc::dwt(random_signal(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(vargc::idwt(wc));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Idwt)->Arg(512)->Arg(942)->Arg(4096);

void BM_WaveletShrink(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    Eigen::MatrixXd M(2, n);
    M.row(0) = random_signal(n).transpose();
    M.row(1) = random_signal(n).reverse().transpose();
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::wavelet_shrink(M, 0.2, 4));
    state.SetItemsProcessed(state.iterations() * 2 * n);
}
BENCHMARK(BM_WaveletShrink)->Arg(512)->Arg(942)->Arg(4096);

}  // namespace
