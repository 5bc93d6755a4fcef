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

#ifndef RELNASH_SIMULATION_HPP_
#define RELNASH_SIMULATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relnash/game.hpp"
#include "relnash/markets.hpp"
#include "relnash/numerics.hpp"
#include "relnash/strategy.hpp"

namespace relnash {

// Per-path gain of each asset position, sum_m h_k(t_m) (S_k(t_{m+1}) - S_k(t_m)),
// stored path-major (num_paths x d).
std::vector<double> asset_gains(const StrategyProcess& strategy, const PathSet& paths,
                                std::size_t threads = 1);

// Per-path simple-return sums sum_m (S_k(t_{m+1}) - S_k(t_m)) / S_k(t_m): the
// gain of holding one currency unit in asset k (num_paths x d).
std::vector<double> return_sums(const PathSet& paths, std::size_t threads = 1);

struct WealthPaths {
  std::size_t num_paths = 0;
  std::size_t num_assets = 0;
  // terminal[i][p].
  std::vector<std::vector<double>> terminal;
  // gains[i][p * d + k].
  std::vector<std::vector<double>> gains;
  // Full trajectories paths[i][p * (M + 1) + m], only when requested.
  std::vector<std::vector<double>> trajectories;
};

WealthPaths wealth_paths(std::span<const StrategyProcess> strategies,
                         const PathSet& paths, std::span<const double> x0,
                         bool keep_trajectories = false, std::size_t threads = 1);

// E[U_i(relative wealth)] with the -inf extension outside the domain.
struct UtilityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t domain_violations = 0;
  bool exact = false;
};

// X_i - (theta_i / n) sum_{j != i} X_j on every path.
std::vector<double> relative_wealth(std::size_t agent, const WealthPaths& wealth,
                                    const GameSpec& game);

UtilityEstimate expected_relative_utility(std::size_t agent, const WealthPaths& wealth,
                                          const PathSet& paths, const GameSpec& game);

enum class DeviationFamily { kAdditiveAmount, kMultiplicative };

std::string family_name(DeviationFamily family);

// Unilateral deviations of one agent. Additive: a constant currency amount
// is added to one asset at a time, for every offset. Multiplicative: the
// whole equilibrium strategy is scaled by each factor.
struct DeviationGrid {
  DeviationFamily family = DeviationFamily::kAdditiveAmount;
  std::vector<double> values;

  static DeviationGrid additive(double lo, double hi, double step);
  static DeviationGrid multiplicative(double lo, double hi, double step);
};

struct GapEntry {
  DeviationFamily family = DeviationFamily::kAdditiveAmount;
  // Asset for additive deviations, -1 for multiplicative ones.
  int asset = -1;
  double value = 0.0;
  // Deviated minus equilibrium expected utility (paired on common paths).
  Estimate improvement;
  std::size_t domain_violations = 0;
};

struct BestResponseReport {
  std::size_t agent = 0;
  UtilityEstimate equilibrium_utility;
  std::vector<GapEntry> entries;
  // Entry closest to failing: largest improvement minus its allowance.
  std::size_t worst = 0;
  // Largest improvement over all entries (the equilibrium itself gives 0).
  double max_improvement = 0.0;
  // Improvement minus allowance at `worst`; PASS iff not positive.
  double max_excess = 0.0;
  // Allowance at `worst`: 3 standard errors of the paired difference
  // (Monte Carlo) or round-off headroom (exhaustive).
  double threshold = 0.0;
  bool exact = false;
  bool pass = false;
};

// Gap of the best deviation on the grid against the equilibrium. The
// equilibrium itself (offset 0 or factor 1) is always a grid member.
BestResponseReport best_response_gap(std::size_t agent,
                                     std::span<const StrategyProcess> equilibrium,
                                     std::span<const DeviationGrid> grids,
                                     const PathSet& paths, const GameSpec& game,
                                     std::size_t threads = 1);

struct ExpMoments {
  double aggregation_constant = 0.0;
  double expected_wealth = 0.0;
  std::optional<double> loss_threshold;
  std::optional<double> loss_probability;
};

// Closed forms for the exponential Black-Scholes equilibrium:
//   E[X_i] = x0_i + C_i |sigma^{-1} mu|^2 T,
//   P(X_i <= K) = Phi((K - x0_i) / (C_i |sigma^{-1} mu| sqrt T) - |sigma^{-1} mu| sqrt T).
// Loss thresholds are optional per agent and must lie below x0_i.
std::vector<ExpMoments> bs_exp_moments(const GameSpec& game,
                                       std::span<const std::optional<double>> thresholds = {});

struct ReparametrizationCheck {
  // Equilibrium amounts of the game with (delta_i / (1 - theta_i / n),
  // theta_i / (1 - theta_i / n)) through the aggregation constants.
  std::vector<double> via_constants;
  // (delta_i + theta_i mean(delta) / (1 - mean(theta))) mu / sigma^2.
  std::vector<double> via_formula;
  double max_difference = 0.0;
};

ReparametrizationCheck reparametrization_crosscheck(double mu, double sigma,
                                                    std::span<const double> deltas,
                                                    std::span<const double> weights);

struct AgentReport {
  UtilityEstimate utility;
  Estimate terminal_wealth;
  std::optional<double> loss_threshold;
  std::optional<Estimate> loss_probability;
};

struct SimulationReport {
  std::string market;
  std::size_t paths = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  std::vector<AgentReport> agents;
  std::vector<BestResponseReport> best_response;
};

// Mean of X_T and P(X_T <= K), exact on exhaustive path sets.
Estimate wealth_mean(std::span<const double> terminal, const PathSet& paths);
Estimate loss_probability(std::span<const double> terminal, double threshold,
                          const PathSet& paths);

}  // namespace relnash

#endif  // RELNASH_SIMULATION_HPP_
