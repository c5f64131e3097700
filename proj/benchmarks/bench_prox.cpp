#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "vargc/companion.hpp"
#include "vargc/prox.hpp"

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 2.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) M(r, c) = gauss(rng);
    return M;
}

void BM_ProjectL1Ball(benchmark::State& state) {
    const Eigen::VectorXd v = random_vector(state.range(0), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::project_l1_ball(v, 1.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProjectL1Ball)->Arg(64)->Arg(512)->Arg(4096);

void BM_ProxLinf(benchmark::State& state) {
    const Eigen::VectorXd v = random_vector(state.range(0), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::prox_linf(v, 0.5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxLinf)->Arg(64)->Arg(512)->Arg(4096);

void BM_ProxSpectral(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Eigen::MatrixXd X = random_matrix(2 * m, 2 * m, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(vargc::prox_spectral(X, 0.3));
}
BENCHMARK(BM_ProxSpectral)->Arg(5)->Arg(10)->Arg(30);

void BM_SpectralNorm(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Eigen::MatrixXd X = random_matrix(2 * m, 2 * m, 4);
    for (auto _ : state) benchmark::DoNotOptimize(vargc::spectral_norm(X));
}
BENCHMARK(BM_SpectralNorm)->Arg(5)->Arg(10)->Arg(30);

}  // namespace
