// Serial reference step versus the fused OpenMP step.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "topowalk/evolution.hpp"

namespace {

using namespace topowalk;

WalkConfig bench_config(int L) {
  WalkConfig c;
  c.L = L;
  c.theta_left = -kPi / 16;
  c.theta_right = kPi / 3;
  c.phi = kPi / 2;
  c.steps = 1;
  c.validate();
  return c;
}

void BM_ReferenceStep(benchmark::State& state) {
  const WalkConfig config = bench_config(static_cast<int>(state.range(0)));
  const StepPlan plan = StepPlan::from_config(config);
  StateVector psi = make_initial(InitialState::PhiPlus, config.L);
  for (auto _ : state) {
    reference::step(psi, plan);
    benchmark::DoNotOptimize(psi.amplitudes.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(psi.amplitudes.size()));
}

void BM_FusedStep(benchmark::State& state) {
  const WalkConfig config = bench_config(static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  Stepper stepper(StepPlan::from_config(config));
  StateVector psi = make_initial(InitialState::PhiPlus, config.L);
  for (auto _ : state) {
    stepper.advance(psi);
    benchmark::DoNotOptimize(psi.amplitudes.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(psi.amplitudes.size()));
}

}  // namespace

BENCHMARK(BM_ReferenceStep)->Arg(65)->Arg(129)->Arg(261)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FusedStep)
    ->ArgsProduct({{65, 129, 261}, {1, omp_get_num_procs()}})
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
