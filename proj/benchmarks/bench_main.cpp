#include <benchmark/benchmark.h>

#include "mirl/estimator.hpp"
#include "mirl/forward_sim.hpp"
#include "mirl/irl_chain.hpp"
#include "mirl/malliavin.hpp"
#include "mirl/potentials.hpp"

namespace {

void BM_SimulateEpisode(benchmark::State& state) {
  const auto& quartic = mirl::lookup("quartic");
  mirl::SimSettings settings;
  settings.dt = 1.0 / static_cast<double>(state.range(0));
  const mirl::SimConfig sim(settings);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirl::simulate_episode(quartic, sim, i++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEpisode)->Arg(1000)->Arg(2000);

void BM_BuildFrame(benchmark::State& state) {
  const auto& quartic = mirl::lookup("quartic");
  const mirl::SimConfig sim;
  const auto traj = mirl::simulate_episode(quartic, sim, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirl::build_frame(traj, sim.s_index()));
  }
}
BENCHMARK(BM_BuildFrame);

void BM_CounterfactualGradient(benchmark::State& state) {
  const auto& quartic = mirl::lookup("quartic");
  const mirl::SimConfig sim;
  const auto stats =
      mirl::simulate_statistics(quartic, sim, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirl::counterfactual_gradient(stats, 0.4, sim.s()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CounterfactualGradient)->Arg(5000)->Arg(20000);

void BM_SimulateStatistics(benchmark::State& state) {
  const auto& quartic = mirl::lookup("quartic");
  const mirl::SimConfig sim;
  std::size_t first = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirl::simulate_statistics(quartic, sim, 1000, first));
    first += 1000;
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateStatistics)->Unit(benchmark::kMillisecond);

void BM_ChainStepReuse(benchmark::State& state) {
  const auto& quartic = mirl::lookup("quartic");
  const mirl::SimConfig sim;
  const auto stats = mirl::simulate_statistics(quartic, sim, 20000);
  mirl::ChainConfig chain;
  mirl::ChainState cs;
  auto rng = mirl::make_stream(chain.chain_seed, mirl::kChainStream, 0);
  double alpha = 0.0;
  for (auto _ : state) {
    const auto est = mirl::counterfactual_gradient(stats, alpha, sim.s());
    alpha = mirl::chain_step(alpha, est, chain, rng, cs).alpha_next;
  }
}
BENCHMARK(BM_ChainStepReuse);

}  // namespace
BENCHMARK_MAIN();
