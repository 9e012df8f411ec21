#include <benchmark/benchmark.h>

#include "tinygan/analytic.hpp"
#include "tinygan/analysis.hpp"
#include "tinygan/integrator.hpp"

namespace {

using namespace tinygan;

const AnnealingSchedule kSchedule{1.0, 3.0, 3.0};

void BM_Rk4Annealed(benchmark::State& state) {
  const AnnealedMode mode{0, kSchedule, CouplingSign::Descent};
  const auto steps = state.range(0);
  const IntegratorConfig cfg{StepMethod::RK4, 1e-3, static_cast<double>(steps) * 1e-3, steps};
  for (auto _ : state) {
    Trajectory traj = simulate(Criterion::linear(), mode, beta_initial_state(kSchedule), cfg);
    benchmark::DoNotOptimize(traj.samples.back());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_Rk4Annealed)->Arg(1000)->Arg(10000);

void BM_Rk4AnnealedLogistic(benchmark::State& state) {
  const AnnealedMode mode{1, kSchedule, CouplingSign::Descent};
  const auto steps = state.range(0);
  const IntegratorConfig cfg{StepMethod::RK4, 1e-3, static_cast<double>(steps) * 1e-3, steps};
  for (auto _ : state) {
    Trajectory traj = simulate(Criterion::logistic(), mode, beta_initial_state(kSchedule), cfg);
    benchmark::DoNotOptimize(traj.samples.back());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_Rk4AnnealedLogistic)->Arg(1000);

void BM_SgdAlternating(benchmark::State& state) {
  const AnnealedMode mode{1, kSchedule, CouplingSign::Descent};
  const auto iterations = state.range(0);
  const SgdConfig cfg{1e-3, iterations, UpdateOrder::Alternating};
  for (auto _ : state) {
    Trajectory traj = sgd_simulate(Criterion::linear(), mode, beta_initial_state(kSchedule), cfg);
    benchmark::DoNotOptimize(traj.samples.back());
  }
  state.SetItemsProcessed(state.iterations() * iterations);
}
BENCHMARK(BM_SgdAlternating)->Arg(10000);

void BM_ClosedFormPsi(benchmark::State& state) {
  double t = 0.0, acc = 0.0;
  for (auto _ : state) {
    acc += beta_psi_solution(kSchedule, t);
    t += 1e-3;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ClosedFormPsi);

void BM_SteadySummary(benchmark::State& state) {
  const AnnealedMode mode{0, kSchedule, CouplingSign::Descent};
  const Trajectory traj = simulate(Criterion::linear(), mode, beta_initial_state(kSchedule),
                                   {StepMethod::RK4, 1e-3, 60.0, 10});
  for (auto _ : state) {
    OscillationSummary s = steady_summary(traj, StateComponent::Psi, 30.0);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SteadySummary);

}  // namespace

BENCHMARK_MAIN();
