#include <benchmark/benchmark.h>

#include "qtomo/designs.hpp"
#include "qtomo/parallel.hpp"

using namespace qtomo;

static void BM_haar_unitary(benchmark::State& state) {
    Rng rng(1);
    const int d = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(haar_random_unitary(d, rng));
}
BENCHMARK(BM_haar_unitary)->Arg(2)->Arg(4)->Arg(16);

static void BM_twirl_conjugate(benchmark::State& state, ExecutionPolicy policy) {
    Rng rng(2);
    const std::vector<Matrix> cliffords = clifford_group(2);
    const Matrix x = random_density(2, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(twirl_conjugate(x, cliffords, policy));
}
BENCHMARK_CAPTURE(BM_twirl_conjugate, serial, ExecutionPolicy::Serial);
BENCHMARK_CAPTURE(BM_twirl_conjugate, parallel, ExecutionPolicy::Parallel);

static void BM_twirl_design_pair(benchmark::State& state,
                                 ExecutionPolicy policy) {
    Rng rng(3);
    const std::vector<Matrix> cliffords = clifford_group(2);
    const Matrix y = random_hermitian(16, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(twirl_design_pair(y, 2, cliffords, policy));
}
BENCHMARK_CAPTURE(BM_twirl_design_pair, serial, ExecutionPolicy::Serial);
BENCHMARK_CAPTURE(BM_twirl_design_pair, parallel, ExecutionPolicy::Parallel);

static void BM_twirl_haar_pair_mc(benchmark::State& state,
                                  ExecutionPolicy policy) {
    Rng rng(4);
    const Matrix y = random_hermitian(16, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(twirl_haar_pair_mc(y, 2, 4096, 11, policy));
}
BENCHMARK_CAPTURE(BM_twirl_haar_pair_mc, serial, ExecutionPolicy::Serial);
BENCHMARK_CAPTURE(BM_twirl_haar_pair_mc, parallel, ExecutionPolicy::Parallel);

static void BM_run_trials(benchmark::State& state, ExecutionPolicy policy) {
    const auto body = [](std::size_t, Rng& rng) {
        const Matrix rho = random_density(4, rng);
        return (rho * rho).trace().real();
    };
    for (auto _ : state)
        benchmark::DoNotOptimize(run_trials(512, 5, body, policy));
}
BENCHMARK_CAPTURE(BM_run_trials, serial, ExecutionPolicy::Serial);
BENCHMARK_CAPTURE(BM_run_trials, parallel, ExecutionPolicy::Parallel);

BENCHMARK_MAIN();
