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

#include "relnash/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relnash/errors.hpp"

namespace relnash {

namespace {

StrategyProcess constant_amounts(const Eigen::VectorXd& v) {
  std::vector<double> values(v.data(), v.data() + v.size());
  return StrategyProcess::constant(values, Quantity::kAmounts);
}

double max_abs_difference(const std::vector<StrategyProcess>& a,
                          const std::vector<StrategyProcess>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = a[i].values();
    const auto y = b[i].values();
    for (std::size_t j = 0; j < x.size(); ++j) out = std::max(out, std::abs(x[j] - y[j]));
  }
  return out;
}

[[noreturn]] void unsupported(const MarketModel& market, const UtilitySpec& utility) {
  throw InvalidInput("no single-agent solver for " + utility.describe() + " in the " +
                     market_name(market) + " market");
}

}  // namespace

SingleAgentSolution solve_single_agent(const MarketModel& market,
                                       const UtilitySpec& utility,
                                       double reduced_capital, double horizon,
                                       const SolveOptions& options) {
  detail::require(horizon > 0.0, "horizon must be positive");
  const double delta = utility.risk_param();
  switch (utility.kind()) {
    case UtilityKind::kExponential: {
      SingleAgentSolution out;
      if (const auto* bs = std::get_if<BlackScholesParams>(&market)) {
        out = solve_exp_bs(*bs, delta);
      } else if (const auto* levy = std::get_if<LevyJumpParams>(&market)) {
        out = solve_exp_levy(*levy, delta, options.newton);
      } else if (const auto* crr = std::get_if<CRRParams>(&market)) {
        out = solve_exp_crr(*crr, delta);
      } else {
        unsupported(market, utility);
      }
      // Exponential optima do not depend on capital.
      out.capital = reduced_capital;
      return out;
    }
    case UtilityKind::kPower:
      if (const auto* bs = std::get_if<BlackScholesParams>(&market))
        return solve_crra_bs(*bs, delta, reduced_capital);
      if (const auto* h = std::get_if<HestonParams>(&market))
        return solve_crra_heston(*h, delta, reduced_capital, options.heston_adjustment);
      unsupported(market, utility);
    case UtilityKind::kCpt:
      if (const auto* bs = std::get_if<BlackScholesParams>(&market))
        return solve_cpt_bs(*bs, horizon, utility.cpt_params(), reduced_capital,
                            options.cpt);
      unsupported(market, utility);
  }
  unsupported(market, utility);
}

EquilibriumResult solve_equilibrium(const GameSpec& game, const SolveOptions& options) {
  validate(game);
  EquilibriumResult out;
  out.feasibility = check_feasibility(game);
  for (std::size_t i = 0; i < game.size(); ++i) {
    if (!out.feasibility[i].feasible) {
      throw InvalidInput("agent " + std::to_string(i) +
                         " is infeasible: reduced capital " +
                         std::to_string(out.feasibility[i].reduced_capital) +
                         " is outside the utility domain");
    }
  }
  const std::vector<double> weights = game.weights();
  out.theta_hat = theta_hat(weights);

  out.unique = true;
  out.constant_in_time = true;
  for (std::size_t i = 0; i < game.size(); ++i) {
    out.single_agent.push_back(solve_single_agent(game.market, game.agents[i].utility,
                                                  out.feasibility[i].reduced_capital,
                                                  game.horizon, options));
    const auto& sol = out.single_agent.back();
    out.unique = out.unique && sol.unique;
    out.constant_in_time = out.constant_in_time && sol.constant_amounts();
    out.psi_star.push_back(constant_amounts(sol.initial_amounts()));
  }

  out.phi_star = aggregate_nash(out.psi_star, weights);
  out.residual = verify_linear_system(out.phi_star, out.psi_star, weights);
  out.direct_solve_discrepancy =
      max_abs_difference(out.phi_star, solve_linear_system_direct(out.psi_star, weights));

  const bool all_exponential =
      std::all_of(game.agents.begin(), game.agents.end(), [](const AgentProfile& a) {
        return a.utility.kind() == UtilityKind::kExponential;
      });
  if (all_exponential && (std::holds_alternative<BlackScholesParams>(game.market) ||
                          std::holds_alternative<CRRParams>(game.market))) {
    std::vector<double> deltas;
    for (const auto& a : game.agents) deltas.push_back(a.utility.risk_param());
    out.aggregation_constants = nash_coefficients(deltas, weights);
  }
  return out;
}

RealizedEquilibrium realize_equilibrium(const EquilibriumResult& result,
                                        const GameSpec& game, const PathSet& paths) {
  detail::require(result.single_agent.size() == game.size(),
                  "realize_equilibrium: result does not belong to this game");
  const std::vector<double> weights = game.weights();
  RealizedEquilibrium out;
  if (result.constant_in_time) {
    out.psi = result.psi_star;
  } else {
    for (const auto& sol : result.single_agent)
      out.psi.push_back(to_shares(realize(sol, paths), paths));
  }
  out.phi = aggregate_nash(out.psi, weights);
  out.residual = verify_linear_system(out.phi, out.psi, weights);
  return out;
}

}  // namespace relnash
