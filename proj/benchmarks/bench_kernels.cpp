#include <benchmark/benchmark.h>

#include "rsvd/qr.hpp"
#include "rsvd/rng.hpp"
#include "rsvd/sketch.hpp"
#include "rsvd/svd.hpp"
#include "rsvd/testmat.hpp"

using namespace rsvd;

namespace {

void BM_Matmul(benchmark::State& state) {
    const int n = int(state.range(0));
    const Matrix a = gaussian_matrix(n, n, RngSeed{1});
    const Matrix b = gaussian_matrix(n, n, RngSeed{2});
    for (auto _ : state) {
        benchmark::DoNotOptimize(matmul(a, b));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);

void BM_HouseholderQr(benchmark::State& state) {
    const int n = int(state.range(0));
    const Matrix y = gaussian_matrix(4 * n, n, RngSeed{3});
    for (auto _ : state) {
        benchmark::DoNotOptimize(qr_factor(y));
    }
}
BENCHMARK(BM_HouseholderQr)->Arg(16)->Arg(32)->Arg(64);

void BM_JacobiSvd(benchmark::State& state) {
    const int n = int(state.range(0));
    const Matrix a = gaussian_matrix(n, n, RngSeed{4});
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_svd(a));
    }
}
BENCHMARK(BM_JacobiSvd)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GaussianDraw(benchmark::State& state) {
    const int n = int(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gaussian_matrix(n, n, RngSeed{++seed}));
    }
}
BENCHMARK(BM_GaussianDraw)->Arg(256);

void BM_SubspaceIteration(benchmark::State& state) {
    const int q = int(state.range(0));
    DecaySpec spec;
    spec.model = DecaySpec::Model::power_law;
    spec.exponent = 2.0;
    spec.n = 256;
    const DecayMatrix dm = decay_matrix(spec, RngSeed{5});
    SketchConfig cfg;
    cfg.k = 8;
    cfg.ell = 16;
    cfg.q = q;
    std::uint64_t s = 0;
    for (auto _ : state) {
        cfg.seed = RngSeed{++s};
        benchmark::DoNotOptimize(randomized_subspace_iteration(dm.matrix, cfg));
    }
    state.SetLabel("n=256 k=8 ell=16");
}
BENCHMARK(BM_SubspaceIteration)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
