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

#include "relnash/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relnash/errors.hpp"

namespace relnash {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_grid(const StrategyProcess& s, const PathSet& paths, const char* who) {
  const std::string tag(who);
  detail::require(s.assets() == paths.num_assets,
                  tag + ": strategy and market dimensions differ");
  detail::require(s.paths() == 1 || s.paths() == paths.num_paths,
                  tag + ": strategy path count does not match the path set");
  detail::require(s.steps() == 1 || s.steps() == paths.steps(),
                  tag + ": strategy step count does not match the path set");
}

Estimate mean_of(std::span<const double> values, const PathSet& paths) {
  if (paths.exhaustive()) return {weighted_mean(values, paths.weights), 0.0};
  return sample_estimate(values);
}

}  // namespace

std::vector<double> return_sums(const PathSet& paths, std::size_t threads) {
  const std::size_t d = paths.num_assets;
  const std::size_t steps = paths.steps();
  std::vector<double> out(paths.num_paths * d, 0.0);
  parallel_for(paths.num_paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t k = 0; k < d; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m < steps; ++m) {
          const double s = paths.price(p, m, k);
          acc += (paths.price(p, m + 1, k) - s) / s;
        }
        out[p * d + k] = acc;
      }
    }
  });
  return out;
}

std::vector<double> asset_gains(const StrategyProcess& strategy, const PathSet& paths,
                                std::size_t threads) {
  require_grid(strategy, paths, "asset_gains");
  const std::size_t d = paths.num_assets;
  if (strategy.is_constant() && strategy.quantity() == Quantity::kAmounts) {
    std::vector<double> out = return_sums(paths, threads);
    for (std::size_t p = 0; p < paths.num_paths; ++p)
      for (std::size_t k = 0; k < d; ++k) out[p * d + k] *= strategy.at(0, 0, k);
    return out;
  }
  const bool amounts = strategy.quantity() == Quantity::kAmounts;
  const std::size_t steps = paths.steps();
  std::vector<double> out(paths.num_paths * d, 0.0);
  parallel_for(paths.num_paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t k = 0; k < d; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m < steps; ++m) {
          const double s = paths.price(p, m, k);
          const double h = amounts ? strategy.at(p, m, k) / s : strategy.at(p, m, k);
          acc += h * (paths.price(p, m + 1, k) - s);
        }
        out[p * d + k] = acc;
      }
    }
  });
  return out;
}

WealthPaths wealth_paths(std::span<const StrategyProcess> strategies,
                         const PathSet& paths, std::span<const double> x0,
                         bool keep_trajectories, std::size_t threads) {
  detail::require(strategies.size() == x0.size(),
                  "wealth_paths: one initial capital per strategy is required");
  WealthPaths out;
  out.num_paths = paths.num_paths;
  out.num_assets = paths.num_assets;
  const std::size_t d = paths.num_assets;
  const std::size_t grid = paths.times.size();
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    out.gains.push_back(asset_gains(strategies[i], paths, threads));
    const auto& g = out.gains.back();
    std::vector<double> terminal(paths.num_paths);
    for (std::size_t p = 0; p < paths.num_paths; ++p) {
      double acc = x0[i];
      for (std::size_t k = 0; k < d; ++k) acc += g[p * d + k];
      terminal[p] = acc;
    }
    out.terminal.push_back(std::move(terminal));

    if (keep_trajectories) {
      const auto& s = strategies[i];
      const bool amounts = s.quantity() == Quantity::kAmounts;
      std::vector<double> traj(paths.num_paths * grid);
      for (std::size_t p = 0; p < paths.num_paths; ++p) {
        double x = x0[i];
        traj[p * grid] = x;
        for (std::size_t m = 0; m + 1 < grid; ++m) {
          for (std::size_t k = 0; k < d; ++k) {
            const double sp = paths.price(p, m, k);
            const double h = amounts ? s.at(p, m, k) / sp : s.at(p, m, k);
            x += h * (paths.price(p, m + 1, k) - sp);
          }
          traj[p * grid + m + 1] = x;
        }
      }
      out.trajectories.push_back(std::move(traj));
    }
  }
  return out;
}

std::vector<double> relative_wealth(std::size_t agent, const WealthPaths& wealth,
                                    const GameSpec& game) {
  const std::size_t n = game.size();
  detail::require(agent < n && wealth.terminal.size() == n,
                  "relative_wealth: wealth does not match the game");
  const double scale = game.agents[agent].competition_weight / static_cast<double>(n);
  std::vector<double> out(wealth.terminal[agent]);
  if (scale == 0.0) return out;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == agent) continue;
    const auto& xj = wealth.terminal[j];
    for (std::size_t p = 0; p < out.size(); ++p) out[p] -= scale * xj[p];
  }
  return out;
}

UtilityEstimate expected_relative_utility(std::size_t agent, const WealthPaths& wealth,
                                          const PathSet& paths, const GameSpec& game) {
  const auto rel = relative_wealth(agent, wealth, game);
  const auto& u = game.agents[agent].utility;
  std::vector<double> values(rel.size());
  UtilityEstimate out;
  out.exact = paths.exhaustive();
  for (std::size_t p = 0; p < rel.size(); ++p) {
    values[p] = u.of_relative(rel[p]);
    if (values[p] == kNegInf) ++out.domain_violations;
  }
  if (out.domain_violations > 0) {
    out.mean = kNegInf;
    out.std_error = 0.0;
    return out;
  }
  const Estimate e = mean_of(values, paths);
  out.mean = e.mean;
  out.std_error = e.std_error;
  return out;
}

std::string family_name(DeviationFamily family) {
  return family == DeviationFamily::kAdditiveAmount ? "additive" : "multiplicative";
}

namespace {

std::vector<double> grid_values(double lo, double hi, double step, double anchor) {
  detail::require(step > 0.0 && lo <= hi, "deviation grid: need lo <= hi and step > 0");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  bool has_anchor = false;
  for (long j = 0; j <= count; ++j) {
    const double v = lo + static_cast<double>(j) * step;
    if (std::abs(v - anchor) < 1e-9 * step) {
      out.push_back(anchor);
      has_anchor = true;
    } else {
      out.push_back(v);
    }
  }
  if (!has_anchor) out.push_back(anchor);
  return out;
}

}  // namespace

DeviationGrid DeviationGrid::additive(double lo, double hi, double step) {
  return {DeviationFamily::kAdditiveAmount, grid_values(lo, hi, step, 0.0)};
}

DeviationGrid DeviationGrid::multiplicative(double lo, double hi, double step) {
  return {DeviationFamily::kMultiplicative, grid_values(lo, hi, step, 1.0)};
}

BestResponseReport best_response_gap(std::size_t agent,
                                     std::span<const StrategyProcess> equilibrium,
                                     std::span<const DeviationGrid> grids,
                                     const PathSet& paths, const GameSpec& game,
                                     std::size_t threads) {
  const std::size_t n = game.size();
  detail::require(agent < n && equilibrium.size() == n,
                  "best_response_gap: one strategy per agent is required");
  const auto x0 = game.initial_capitals();
  const WealthPaths wealth = wealth_paths(equilibrium, paths, x0, false, threads);
  const std::vector<double> rel = relative_wealth(agent, wealth, game);
  const std::vector<double> returns = return_sums(paths, threads);
  const auto& u = game.agents[agent].utility;
  const std::size_t d = paths.num_assets;
  const std::size_t count = paths.num_paths;

  BestResponseReport out;
  out.agent = agent;
  out.exact = paths.exhaustive();
  out.equilibrium_utility = expected_relative_utility(agent, wealth, paths, game);
  detail::require(out.equilibrium_utility.domain_violations == 0,
                  "best_response_gap: the equilibrium leaves the utility domain on " +
                      std::to_string(out.equilibrium_utility.domain_violations) + " paths");

  std::vector<double> base(count);
  std::vector<double> own(count, 0.0);
  for (std::size_t p = 0; p < count; ++p) {
    base[p] = u.of_relative(rel[p]);
    for (std::size_t k = 0; k < d; ++k) own[p] += wealth.gains[agent][p * d + k];
  }

  const double exact_slack = 1e-12 * (1.0 + std::abs(out.equilibrium_utility.mean));
  std::vector<double> diff(count);
  auto evaluate = [&](DeviationFamily family, int asset, double value) {
    GapEntry e{family, asset, value, {}, 0};
    for (std::size_t p = 0; p < count; ++p) {
      const double shift = family == DeviationFamily::kAdditiveAmount
                               ? value * returns[p * d + static_cast<std::size_t>(asset)]
                               : (value - 1.0) * own[p];
      const double v = u.of_relative(rel[p] + shift);
      if (v == kNegInf) ++e.domain_violations;
      diff[p] = v - base[p];
    }
    if (e.domain_violations > 0) {
      e.improvement = {kNegInf, 0.0};
    } else {
      e.improvement = mean_of(diff, paths);
    }
    out.entries.push_back(e);
  };

  for (const auto& grid : grids) {
    for (double v : grid.values) {
      if (grid.family == DeviationFamily::kAdditiveAmount) {
        for (std::size_t k = 0; k < d; ++k) evaluate(grid.family, static_cast<int>(k), v);
      } else {
        evaluate(grid.family, -1, v);
      }
    }
  }

  out.max_improvement = kNegInf;
  out.max_excess = kNegInf;
  for (std::size_t j = 0; j < out.entries.size(); ++j) {
    const auto& e = out.entries[j];
    const double allowed = out.exact ? exact_slack : 3.0 * e.improvement.std_error;
    const double excess = e.improvement.mean - allowed;
    out.max_improvement = std::max(out.max_improvement, e.improvement.mean);
    if (excess > out.max_excess) {
      out.max_excess = excess;
      out.worst = j;
      out.threshold = allowed;
    }
  }
  out.pass = out.max_excess <= 0.0;
  return out;
}

std::vector<ExpMoments> bs_exp_moments(const GameSpec& game,
                                       std::span<const std::optional<double>> thresholds) {
  validate(game);
  const auto* bs = std::get_if<BlackScholesParams>(&game.market);
  detail::require(bs != nullptr, "bs_exp_moments: needs a Black-Scholes market");
  detail::require(thresholds.empty() || thresholds.size() == game.size(),
                  "bs_exp_moments: one loss threshold slot per agent is required");
  std::vector<double> deltas;
  for (const auto& a : game.agents) {
    detail::require(a.utility.kind() == UtilityKind::kExponential,
                    "bs_exp_moments: every agent needs exponential utility");
    deltas.push_back(a.utility.risk_param());
  }
  const auto c = nash_coefficients(deltas, game.weights());
  const Eigen::VectorXd theta_mpr = bs->sigma.fullPivLu().solve(bs->mu);
  const double m = theta_mpr.norm();
  const double t = game.horizon;

  std::vector<ExpMoments> out(game.size());
  for (std::size_t i = 0; i < game.size(); ++i) {
    const double x0 = game.agents[i].initial_capital;
    out[i].aggregation_constant = c[i];
    out[i].expected_wealth = x0 + c[i] * m * m * t;
    if (!thresholds.empty() && thresholds[i]) {
      const double k = *thresholds[i];
      detail::require(k < x0, "bs_exp_moments: loss threshold must lie below x0 of agent " +
                                  std::to_string(i));
      out[i].loss_threshold = k;
      const double spread = c[i] * m * std::sqrt(t);
      // A zero position never loses.
      out[i].loss_probability =
          spread > 0.0 ? normal_cdf((k - x0) / spread - m * std::sqrt(t)) : 0.0;
    }
  }
  return out;
}

ReparametrizationCheck reparametrization_crosscheck(double mu, double sigma,
                                                    std::span<const double> deltas,
                                                    std::span<const double> weights) {
  detail::require(!deltas.empty() && deltas.size() == weights.size(),
                  "reparametrization_crosscheck: one delta per weight is required");
  detail::require(sigma > 0.0, "reparametrization_crosscheck: sigma must be positive");
  validate_weights(weights);
  const std::size_t count = deltas.size();
  const double n = static_cast<double>(count);
  std::vector<double> d_mod(count);
  std::vector<double> t_mod(count);
  double d_bar = 0.0;
  double t_bar = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    detail::require(deltas[i] > 0.0, "reparametrization_crosscheck: delta must be positive");
    const double shrink = 1.0 - weights[i] / n;
    detail::require(shrink > 0.0, "reparametrization_crosscheck: theta_i must be below n");
    d_mod[i] = deltas[i] / shrink;
    t_mod[i] = weights[i] / shrink;
    d_bar += deltas[i] / n;
    t_bar += weights[i] / n;
  }
  detail::require(t_bar < 1.0, "reparametrization_crosscheck: mean weight must be below 1");

  const double unit = mu / (sigma * sigma);
  const auto c = detail::nash_coefficients_unchecked(d_mod, t_mod);
  ReparametrizationCheck out;
  for (std::size_t i = 0; i < count; ++i) {
    out.via_constants.push_back(c[i] * unit);
    out.via_formula.push_back((deltas[i] + weights[i] * d_bar / (1.0 - t_bar)) * unit);
    out.max_difference = std::max(out.max_difference,
                                  std::abs(out.via_constants[i] - out.via_formula[i]));
  }
  return out;
}

Estimate wealth_mean(std::span<const double> terminal, const PathSet& paths) {
  return mean_of(terminal, paths);
}

Estimate loss_probability(std::span<const double> terminal, double threshold,
                          const PathSet& paths) {
  std::vector<double> hits(terminal.size());
  for (std::size_t p = 0; p < terminal.size(); ++p) hits[p] = terminal[p] <= threshold;
  return mean_of(hits, paths);
}

}  // namespace relnash
