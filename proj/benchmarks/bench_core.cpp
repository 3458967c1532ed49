#include <benchmark/benchmark.h>

#include <random>

#include "nestgil/gil.hpp"
#include "nestgil/operators.hpp"
#include "nestgil/phantom.hpp"
#include "nestgil/prox.hpp"

using namespace nestgil;

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

void BM_theta_block(benchmark::State& state) {
    Eigen::VectorXd z = random_vector(1089, 1);
    ProxWeights w;
    for (auto _ : state) benchmark::DoNotOptimize(theta(z, 0.05, w));
}
BENCHMARK(BM_theta_block);

void BM_gil_restore_patch(benchmark::State& state) {
    auto grad = gradient_extractor();
    GilConfig cfg;
    cfg.extractor = &grad;
    cfg.tau = 1.0 / 64.0;
    cfg.n_domains = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    Image m(33, 33);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& v : m.values) v = uni(rng);
    for (auto _ : state) benchmark::DoNotOptimize(gil_restore(m, cfg));
}
BENCHMARK(BM_gil_restore_patch)->Arg(1)->Arg(3)->Arg(6);

void BM_gaussian_apply(benchmark::State& state) {
    auto phi = gaussian_orthonormal(272, 1089, 3);
    Eigen::VectorXd x = random_vector(1089, 4);
    for (auto _ : state) benchmark::DoNotOptimize(phi.apply(x));
}
BENCHMARK(BM_gaussian_apply);

void BM_radon_apply(benchmark::State& state) {
    const int side = 64;
    auto phi = radon_parallel(side, static_cast<int>(state.range(0)), 93);
    Eigen::VectorXd x = vectorize(shepp_logan(side));
    for (auto _ : state) benchmark::DoNotOptimize(phi.apply(x));
}
BENCHMARK(BM_radon_apply)->Arg(60)->Arg(180);

}  // namespace

BENCHMARK_MAIN();
