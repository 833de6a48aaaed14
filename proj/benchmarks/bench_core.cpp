#include <benchmark/benchmark.h>

#include <sstream>

#include "momlim/algorithms.hpp"
#include "momlim/bounds.hpp"
#include "momlim/state_space.hpp"

namespace {

using namespace momlim;

void BM_SimulateConstant(benchmark::State& state) {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig algo{Algorithm::FedAvgM, 0.9, 1, 1.0, StepSchedule::constant(0.5)};
    const long T = state.range(0);
    for (auto _ : state) {
        Trajectory traj = simulate(problem, algo, T, 0.0, RecordPolicy::final_only());
        benchmark::DoNotOptimize(traj.terminal_theta);
    }
    state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_SimulateConstant)->Arg(100000)->Arg(1000000);

void BM_SimulatePolynomial(benchmark::State& state) {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig algo{Algorithm::FedAvgM, 0.9, 1, 1.0,
                          StepSchedule::polynomial(0.5, 1.0)};
    const long T = state.range(0);
    for (auto _ : state) {
        Trajectory traj = simulate(problem, algo, T, 0.0, RecordPolicy::final_only());
        benchmark::DoNotOptimize(traj.terminal_theta);
    }
    state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_SimulatePolynomial)->Arg(100000)->Arg(1000000);

void BM_SimulateLocalSteps(benchmark::State& state) {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig algo{Algorithm::FedCM, 0.9, static_cast<int>(state.range(0)), 0.05,
                          StepSchedule::constant(0.5)};
    for (auto _ : state) {
        Trajectory traj = simulate(problem, algo, 100000, 0.0, RecordPolicy::final_only());
        benchmark::DoNotOptimize(traj.terminal_theta);
    }
}
BENCHMARK(BM_SimulateLocalSteps)->Arg(2)->Arg(5)->Arg(10);

void BM_ZeroStateResponse(benchmark::State& state) {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig algo{Algorithm::FedAvgM, 0.5, 1, 1.0, StepSchedule::constant(0.5)};
    const SystemMatrices system = build_system(problem, algo);
    for (auto _ : state)
        benchmark::DoNotOptimize(zero_state_response(system, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZeroStateResponse)->Arg(1000)->Arg(10000);

void BM_AltSumPsi1(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(alt_sum_psi1(state.range(0), 1.0, 1.0, 0.5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AltSumPsi1)->Arg(10000)->Arg(100000);

void BM_HurwitzZeta(benchmark::State& state) {
    // Warm call dominates (memoized afterwards); measure the cached path.
    benchmark::DoNotOptimize(hurwitz_zeta(2.0, 1));
    for (auto _ : state) benchmark::DoNotOptimize(hurwitz_zeta(2.0, state.range(0)));
}
BENCHMARK(BM_HurwitzZeta)->Arg(1)->Arg(32);

} // namespace

BENCHMARK_MAIN();
