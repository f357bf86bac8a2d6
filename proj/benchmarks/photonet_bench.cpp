// Copyright 2026 The photonet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "photonet/certifier.hpp"
#include "photonet/distribution.hpp"
#include "photonet/fitter.hpp"
#include "photonet/ring.hpp"

namespace {

using namespace photonet;

void BM_TriangleIdeal(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(triangle_distribution(0.85, {0.0, 0.0, 0.0}));
}
BENCHMARK(BM_TriangleIdeal);

void BM_TriangleNoisy(benchmark::State& state) {
  NoiseParams noise;
  noise.impurity = 0.006875;
  noise.channel_transmissivity = 0.97;
  noise.detector_efficiency = 0.97;
  for (auto _ : state) benchmark::DoNotOptimize(triangle_distribution(0.85, {0.0, 0.0, 0.0}, PovmVariant::passive, noise));
}
BENCHMARK(BM_TriangleNoisy);

void BM_Ring(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<double> phases(static_cast<std::size_t>(n), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(ring_distribution(n, 0.7, phases));
}
BENCHMARK(BM_Ring)->DenseRange(3, 7);

void BM_TriangleLp(benchmark::State& state) {
  const FeasibilityProblem problem = build_triangle_lp(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(problem));
}
BENCHMARK(BM_TriangleLp);

void BM_RingLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FeasibilityProblem problem = build_ring_lp(RingContraction(n, 0.9, std::vector<double>(static_cast<std::size_t>(n), 0.0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(problem));
}
BENCHMARK(BM_RingLp)->DenseRange(4, 8, 2);

// One training step's worth of work: grid loss with gradient.
void BM_FitterStep(benchmark::State& state) {
  const OutcomeDistribution target = triangle_distribution(0.85, {0.0, 0.0, 0.0});
  ResponseNetwork model(3, passive_alphabet());
  model.initialize(1);
  std::mt19937_64 rng(2);
  TrainingConfig config;
  config.batch_latent_samples = static_cast<std::size_t>(state.range(0));
  const LatentGrid grid = jittered_grid(3, config.grid_points_per_source(3), rng);
  for (auto _ : state) benchmark::DoNotOptimize(grid_loss(model, target, grid, true));
}
BENCHMARK(BM_FitterStep)->Arg(512)->Arg(8192);

void BM_Estimate(benchmark::State& state) {
  ResponseNetwork model(3, passive_alphabet());
  model.initialize(1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_distribution(model, 100000, 3));
}
BENCHMARK(BM_Estimate);

}  // namespace

BENCHMARK_MAIN();
