// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/classical_bounds.hpp>
#include <tritterlab/interference.hpp>
#include <tritterlab/permanent.hpp>
#include <tritterlab/reconstruction.hpp>

#include "oracles.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace tritterlab;

namespace {

void BM_PermanentRyser(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto m = oracle::random_matrix(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(permanent(m));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PermanentRyser)->DenseRange(2, 16, 2);

void BM_PermanentNaive(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto m = oracle::random_matrix(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::naive_permanent(m));
}
BENCHMARK(BM_PermanentNaive)->DenseRange(2, 9, 1);

void BM_EvolveQuantum(benchmark::State& state) {
    const auto u = fourier_matrix(3);
    const int n = static_cast<int>(state.range(0));
    const FockOutcome in{n - 2 * (n / 3), n / 3, n / 3};
    for (auto _ : state) benchmark::DoNotOptimize(evolve_quantum(u, in));
}
BENCHMARK(BM_EvolveQuantum)->DenseRange(3, 9, 3);

void BM_HomEngine(benchmark::State& state) {
    const auto u = ideal_tritter();
    DelayConfig d;
    d.delays = {0.3, -0.2, 0.0};
    const auto s = OverlapMatrix::from_delays(d);
    for (auto _ : state) {
        for (const auto& o : enumerate_outcomes(3, 3)) benchmark::DoNotOptimize(hom_probability_general(u, {1, 1, 1}, o, s));
    }
}
BENCHMARK(BM_HomEngine);

void BM_PhaseAverage(benchmark::State& state) {
    const auto u = ideal_tritter();
    const auto a = CoherentInput::equal(1.0);
    const auto method = AveragingMethod::quadrature(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase_averaged_probability(u, a, {1, 1, 1}, Scenario::all_interfering(), method));
    }
}
BENCHMARK(BM_PhaseAverage)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FitMatrix(benchmark::State& state) {
    const TransferMatrix truth(oracle::printed_u795());
    const auto v = predict_visibilities(truth);
    FitOptions options;
    options.restarts = 0;
    for (auto _ : state) benchmark::DoNotOptimize(fit_matrix(v, truth.routing_probabilities(), 1.0, options));
}
BENCHMARK(BM_FitMatrix)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
