// Parallel kernels against their serial references. Set OMP_NUM_THREADS to vary
// the thread count.

#include <benchmark/benchmark.h>

#include "aisr/mcsim.hpp"
#include "aisr/sweep.hpp"

namespace {

aisr::SweepSpec grid(int n) {
  auto spec = aisr::figure_sweep_spec("fig2a", ".");
  spec.axes[0].steps = n;
  spec.axes[1].steps = n;
  return spec;
}

void BM_Grid(benchmark::State& state) {
  const auto spec = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(aisr::evaluate_grid(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_GridSerial(benchmark::State& state) {
  const auto spec = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(aisr::evaluate_grid_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

aisr::PayoffMatrix fig2c() {
  aisr::RaceParams p;
  p.p_fo = 0.5;
  return aisr::averaged_payoff_matrix(p);
}

void BM_Fixation(benchmark::State& state) {
  const auto pi = fig2c();
  const aisr::SimConfig cfg{static_cast<std::uint64_t>(state.range(0)), 1, 10'000'000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        aisr::simulate_fixation(aisr::Strategy::AU, aisr::Strategy::AS, pi, {50, 0.1}, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FixationSerial(benchmark::State& state) {
  const auto pi = fig2c();
  const aisr::SimConfig cfg{static_cast<std::uint64_t>(state.range(0)), 1, 10'000'000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        aisr::simulate_fixation_serial(aisr::Strategy::AU, aisr::Strategy::AS, pi, {50, 0.1}, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Grid)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSerial)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fixation)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FixationSerial)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
