// Serial reference kernels vs their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "regmdp/kernels.hpp"
#include "regmdp/policy_engine.hpp"
#include "regmdp/scenario.hpp"
#include "regmdp/threshold.hpp"

namespace {

using namespace regmdp;

// Canonical model on 31 states with action step 1e-4: ~10k actions per sweep.
RegulationMdp large_mdp() {
  auto sc = canonical_scenario();
  sc.levels = build_state_space(0.0, 1.0, 31, 1.0).levels();
  sc.drift = DriftModel::constant(0.3, sc.levels.size()).probs();
  sc.action_step = 1e-4;
  return sc.mdp();
}

template <bool Parallel>
void BM_BellmanSweep(benchmark::State& state) {
  const auto mdp = large_mdp();
  const auto t = kernels::BellmanTables::from(mdp);
  std::vector<double> v(mdp.n_states(), -1.0), out(mdp.n_states());
  std::vector<std::size_t> arg(mdp.n_states());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::bellman_sweep(t, v, out, arg);
    } else {
      kernels::serial::bellman_sweep(t, v, out, arg);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <Backend B>
void BM_ValueIteration(benchmark::State& state) {
  const auto mdp = canonical_scenario().mdp();
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(mdp, 1e-11, B).iterations);
}

template <Backend B>
void BM_OptimalThreshold(benchmark::State& state) {
  const auto mdp = canonical_scenario().mdp();
  for (auto _ : state) benchmark::DoNotOptimize(optimal_threshold(mdp, 1e-9, B));
}

template <bool Parallel>
void BM_EpisodeReturns(benchmark::State& state) {
  const auto mdp = canonical_scenario().mdp();
  const auto t = kernels::EpisodeTables::from(mdp, threshold_policy(mdp, 0.45));
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::episode_returns(t, 7, 0, mdp.space().backlash_index(), 200, out);
    } else {
      kernels::serial::episode_returns(t, 7, 0, mdp.space().backlash_index(), 200, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BellmanSweep<false>)->Name("bellman_sweep/serial");
BENCHMARK(BM_BellmanSweep<true>)->Name("bellman_sweep/omp");
BENCHMARK(BM_ValueIteration<Backend::Serial>)->Name("value_iteration/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValueIteration<Backend::Parallel>)->Name("value_iteration/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimalThreshold<Backend::Serial>)->Name("optimal_threshold/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimalThreshold<Backend::Parallel>)->Name("optimal_threshold/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpisodeReturns<false>)->Name("episode_returns/serial")->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpisodeReturns<true>)->Name("episode_returns/omp")->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
