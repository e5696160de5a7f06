// Microbenchmarks for the hot paths: kernel predictor evaluation (linear in
// the training set size) and full reverse trajectories.

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "empdiff/empdiff.hpp"

namespace {

using namespace empdiff;

TargetSpec unit_gaussian(int d) {
  return TargetSpec::isotropic_gaussian(Eigen::VectorXd::Zero(d), 1.0);
}

void bm_schedule_linear(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Schedule sched = Schedule::linear(T, 1e-4, 0.02);
    benchmark::DoNotOptimize(sched.alpha_bar(T));
  }
}
BENCHMARK(bm_schedule_linear)->Arg(1000)->Arg(4000);

void bm_eps_empirical_eval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = 16;
  Schedule sched = Schedule::linear(1000, 1e-4, 0.02);
  Dataset data = sample_dataset(unit_gaussian(d), n, 7);
  EmpiricalEps pred(sched, data);
  Eigen::VectorXd x =
      noise_to(sched, data.points.row(0).transpose(), 500, 11).state;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pred(x, 500));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_eps_empirical_eval)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void bm_xi_empirical_eval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = 16;
  Schedule sched = Schedule::linear(1000, 1e-4, 0.02);
  Dataset data = sample_dataset(unit_gaussian(d), n, 7);
  SGrid grid = SGrid::sampled(sched, data, 8, 13, true);
  Eigen::VectorXd x =
      noise_to(sched, data.points.row(0).transpose(), 500, 11).state;
  EmpiricalXi pred(sched, data, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pred(x, 500));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_xi_empirical_eval)->RangeMultiplier(10)->Range(100, 10000)->Complexity();

void bm_ddim_trajectory(benchmark::State& state) {
  const int steps = static_cast<int>(state.range(0));
  const int d = 8;
  Schedule full = Schedule::linear(1000, 1e-4, 0.02);
  Schedule sched = full.subsequence(steps);
  Dataset data = sample_dataset(unit_gaussian(d), 1000, 7);
  EmpiricalEps pred(sched, data);
  StartSpec start = StartFromNoise{d};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto batch = generate(sched, pred, sampler_method::ddim, 1, start, ++seed, 1);
    benchmark::DoNotOptimize(batch.front().final_state());
  }
}
BENCHMARK(bm_ddim_trajectory)->Arg(10)->Arg(50)->Arg(100);

void bm_gaussian_stream(benchmark::State& state) {
  rng_stream rng(42, stream_tag::misc, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.gaussian());
  }
}
BENCHMARK(bm_gaussian_stream);

}  // namespace

BENCHMARK_MAIN();
