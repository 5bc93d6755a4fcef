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

#ifndef RELNASH_EQUILIBRIUM_HPP_
#define RELNASH_EQUILIBRIUM_HPP_

#include <optional>
#include <vector>

#include "relnash/cpt.hpp"
#include "relnash/game.hpp"
#include "relnash/markets.hpp"
#include "relnash/solvers.hpp"
#include "relnash/strategy.hpp"
#include "relnash/utility.hpp"

namespace relnash {

struct SolveOptions {
  NewtonConfig newton;
  CptConfig cpt;
  // Correction to the myopic Heston fraction, shared by all power-utility
  // agents.
  std::optional<HestonAdjustment> heston_adjustment;
};

// Optimal strategy of the single-agent problem with the given (reduced)
// capital. Supported pairs: exponential utility in Black-Scholes, jump and
// binomial markets; power utility in Black-Scholes and Heston; prospect
// theory in one-dimensional Black-Scholes.
SingleAgentSolution solve_single_agent(const MarketModel& market,
                                       const UtilitySpec& utility,
                                       double reduced_capital, double horizon,
                                       const SolveOptions& options = {});

struct EquilibriumResult {
  std::vector<SingleAgentSolution> single_agent;
  // Amounts held at t = 0, one 1 x 1 x d process per agent. For policies
  // with constant amounts these are the whole strategies.
  std::vector<StrategyProcess> psi_star;
  std::vector<StrategyProcess> phi_star;
  double theta_hat = 0.0;
  // C_i with phi_i = C_i times the unit-risk-tolerance amount; only for
  // exponential utility in the Black-Scholes and binomial markets.
  std::optional<std::vector<double>> aggregation_constants;
  std::vector<FeasibilityReport> feasibility;
  // Linear-system residual of (phi_star, psi_star).
  double residual = 0.0;
  // max |phi_star - dense LU solution|.
  double direct_solve_discrepancy = 0.0;
  bool unique = false;
  bool constant_in_time = false;
};

// Solves every agent's auxiliary problem with reduced capital and
// aggregates. Throws InvalidInput when some agent is infeasible.
EquilibriumResult solve_equilibrium(const GameSpec& game,
                                    const SolveOptions& options = {});

struct RealizedEquilibrium {
  std::vector<StrategyProcess> psi;
  std::vector<StrategyProcess> phi;
  double residual = 0.0;
};

// Strategies on a path set. Constant-amount equilibria stay 1 x 1 x d
// amounts; otherwise every agent is converted to a full share array.
RealizedEquilibrium realize_equilibrium(const EquilibriumResult& result,
                                        const GameSpec& game, const PathSet& paths);

}  // namespace relnash

#endif  // RELNASH_EQUILIBRIUM_HPP_
