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

#ifndef RELNASH_GAME_HPP_
#define RELNASH_GAME_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "relnash/markets.hpp"
#include "relnash/strategy.hpp"
#include "relnash/utility.hpp"

namespace relnash {

// One of the n competing investors.
struct AgentProfile {
  double initial_capital = 0.0;
  // Weight theta_i in [0,1] on the peers' average terminal wealth.
  double competition_weight = 0.0;
  UtilitySpec utility = UtilitySpec::exponential(1.0);
};

// n agents trading in one common market up to the horizon T (years).
struct GameSpec {
  std::vector<AgentProfile> agents;
  MarketModel market;
  double horizon = 1.0;

  std::size_t size() const { return agents.size(); }
  std::vector<double> weights() const;
  std::vector<double> initial_capitals() const;
};

// Throws InvalidInput on an empty agent list, weights outside [0,1], a
// non-positive horizon or invalid market parameters.
void validate(const GameSpec& game);

struct FeasibilityReport {
  bool feasible = false;
  // x0_i - (theta_i / n) sum_{j != i} x0_j: the capital left for the agent's
  // own optimization after hedging the peers' claim.
  double reduced_capital = 0.0;
  // alpha_i = x0_i / sum_j x0_j.
  double capital_share = 0.0;
  // Largest theta_i keeping the reduced capital inside the utility domain,
  // n alpha_i / (1 - alpha_i) capped to [0,1].
  double theta_upper_bound = 1.0;
};

// The bound is reported, not enforced.
std::vector<FeasibilityReport> check_feasibility(std::span<const AgentProfile> agents);
std::vector<FeasibilityReport> check_feasibility(const GameSpec& game);

double reduced_capital(std::span<const AgentProfile> agents, std::size_t agent);

void validate_weights(std::span<const double> weights);

// sum_i theta_i / (n + theta_i); always below n / (n + 1).
double theta_hat(std::span<const double> weights);

// Scalar form of the equilibrium map:
//   c_i = n/(n+theta_i) a_i + theta_i/((n+theta_i)(1-theta_hat)) sum_j n/(n+theta_j) a_j.
// With a_i = delta_i this yields the constants C_i of the exponential
// Black-Scholes and binomial equilibria.
std::vector<double> nash_coefficients(std::span<const double> own,
                                      std::span<const double> weights);

// Maps single-agent optimal strategies psi* to the unique Nash equilibrium,
// pointwise in (path, step, asset). All inputs must share one shape.
std::vector<StrategyProcess> aggregate_nash(std::span<const StrategyProcess> psi_star,
                                            std::span<const double> weights);

// max_{i,k,t} |psi_i - phi_i + (theta_i/n) sum_{j != i} phi_j|.
double verify_linear_system(std::span<const StrategyProcess> phi,
                            std::span<const StrategyProcess> psi_star,
                            std::span<const double> weights);

// Same equilibrium from a dense LU solve of the n x n system at every
// (path, step, asset); cross-check for aggregate_nash.
std::vector<StrategyProcess> solve_linear_system_direct(
    std::span<const StrategyProcess> psi_star, std::span<const double> weights);

namespace detail {
// nash_coefficients without the [0,1] weight check; the caller guarantees
// 1 - theta_hat != 0.
std::vector<double> nash_coefficients_unchecked(std::span<const double> own,
                                                std::span<const double> weights);
}  // namespace detail

}  // namespace relnash

#endif  // RELNASH_GAME_HPP_
