// Trajectory simulation: serial per-sample propagation vs the OpenMP phase kernel.

#include <benchmark/benchmark.h>

#include "envprobe/commutator.hpp"
#include "envprobe/dynamics.hpp"

using namespace envprobe;

namespace {

HamiltonianParams params_for(int n) {
    HamiltonianParams p = HamiltonianParams::zeros(n);
    p.alpha = Eigen::Vector3d(1.0, 2.0, 3.0);
    for (int k = 0; k < p.dim(); ++k) {
        p.beta(k) = 1.0 / (k + 1);
        p.gamma(k % 3, k) = 1.0;
    }
    return p;
}

SimulationOptions options() {
    SimulationOptions o;
    o.steps_forward = 500;
    o.steps_backward = 3;
    return o;
}

void BM_Reference(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto p = params_for(n);
    const auto b = build_generators(n);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_trajectory_reference(p, b, options()));
}

void BM_Parallel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto p = params_for(n);
    const auto b = build_generators(n);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_trajectory(p, b, options()));
}

void BM_NestedOracle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto p = params_for(n);
    const auto b = build_generators(n);
    for (auto _ : state) benchmark::DoNotOptimize(nested_derivative_matrices(p, b, 6));
}

} // namespace

BENCHMARK(BM_Reference)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(2)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NestedOracle)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
