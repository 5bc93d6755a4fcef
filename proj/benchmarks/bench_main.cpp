// Copyright 2026 The relnash Authors
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

#include "relnash/cpt.hpp"
#include "relnash/equilibrium.hpp"
#include "relnash/game.hpp"
#include "relnash/markets.hpp"
#include "relnash/simulation.hpp"
#include "relnash/solvers.hpp"

namespace relnash {
namespace {

BlackScholesParams market(std::size_t d) {
  BlackScholesParams p{Eigen::VectorXd::Constant(d, 0.05), Eigen::MatrixXd::Identity(d, d) * 0.2,
                       Eigen::VectorXd::Ones(d)};
  for (std::size_t k = 1; k < d; ++k) p.sigma(k, k - 1) = 0.05;
  return p;
}

void BM_SimulateBlackScholes(benchmark::State& state) {
  const auto p = market(static_cast<std::size_t>(state.range(0)));
  const auto paths = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_bs(p, 1.0, 50, paths, 1));
  state.SetItemsProcessed(state.iterations() * state.range(1) * 50);
}
BENCHMARK(BM_SimulateBlackScholes)->Args({1, 10000})->Args({5, 10000})->Unit(benchmark::kMillisecond);

void BM_SimulateHeston(benchmark::State& state) {
  HestonParams h{1.25, 2.0, 0.04, 0.3, -0.5, 0.04, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_heston(h, 1.0, 250, 2000, 1));
  state.SetItemsProcessed(state.iterations() * 2000 * 250);
}
BENCHMARK(BM_SimulateHeston)->Unit(benchmark::kMillisecond);

void BM_WealthPaths(benchmark::State& state) {
  const auto paths = simulate_bs(market(1), 1.0, 100, 100000, 2);
  const std::vector<StrategyProcess> s(2, StrategyProcess::constant(std::vector<double>{2.5}, Quantity::kAmounts));
  const std::vector<double> x0{1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(wealth_paths(s, paths, x0));
}
BENCHMARK(BM_WealthPaths)->Unit(benchmark::kMillisecond);

void BM_AggregateNash(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  std::vector<StrategyProcess> psi;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = u(rng);
    std::vector<double> v(5);
    for (auto& x : v) x = u(rng);
    psi.push_back(StrategyProcess::constant(v, Quantity::kAmounts));
  }
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_nash(psi, w));
}
BENCHMARK(BM_AggregateNash)->Arg(10)->Arg(100)->Arg(1000);

void BM_DirectLinearSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> w(n, 0.5);
  std::vector<StrategyProcess> psi(n, StrategyProcess::constant(std::vector<double>{1.0}, Quantity::kAmounts));
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear_system_direct(psi, w));
}
BENCHMARK(BM_DirectLinearSolve)->Arg(10)->Arg(100);

void BM_LevyNewton(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto bs = market(d);
  LevyJumpParams p;
  p.mu = bs.mu;
  p.sigma = bs.sigma;
  p.s0 = bs.s0;
  p.intensity = 2.0;
  p.atoms = {{Eigen::VectorXd::Constant(d, -0.3), 0.3}, {Eigen::VectorXd::Constant(d, 0.2), 0.5},
             {Eigen::VectorXd::Constant(d, 1.5), 0.2}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_exp_levy(p, 1.0));
}
BENCHMARK(BM_LevyNewton)->Arg(1)->Arg(3);

void BM_CptSolve(benchmark::State& state) {
  const CptParams c{4.5, 2.0, 0.5, 0.88, 1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(CptSolution(0.05, 0.2, 1.0, 1.0, c, 1.0001, {}));
}
BENCHMARK(BM_CptSolve)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace relnash

BENCHMARK_MAIN();
