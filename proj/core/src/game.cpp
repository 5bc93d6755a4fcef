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

#include "relnash/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "relnash/errors.hpp"

namespace relnash {

namespace {

void require_common_shape(std::span<const StrategyProcess> strategies,
                          std::size_t expected_count, const char* who) {
  const std::string tag(who);
  detail::require(!strategies.empty(), tag + ": no strategies supplied");
  detail::require(strategies.size() == expected_count,
                  tag + ": one strategy per weight is required");
  for (const auto& s : strategies) {
    detail::require(s.same_shape(strategies.front()),
                    tag + ": strategies must share one grid and quantity");
  }
}

}  // namespace

std::vector<double> GameSpec::weights() const {
  std::vector<double> w;
  w.reserve(agents.size());
  for (const auto& a : agents) w.push_back(a.competition_weight);
  return w;
}

std::vector<double> GameSpec::initial_capitals() const {
  std::vector<double> x;
  x.reserve(agents.size());
  for (const auto& a : agents) x.push_back(a.initial_capital);
  return x;
}

void validate(const GameSpec& game) {
  detail::require(!game.agents.empty(), "game: the agent list is empty");
  detail::require(game.horizon > 0.0 && std::isfinite(game.horizon),
                  "game: horizon must be positive");
  validate_weights(game.weights());
  for (const auto& a : game.agents) {
    detail::require(std::isfinite(a.initial_capital),
                    "game: initial capital must be finite");
  }
  validate(game.market);
}

void validate_weights(std::span<const double> weights) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    detail::require(weights[i] >= 0.0 && weights[i] <= 1.0,
                    "competition weight " + std::to_string(i) +
                        " must lie in [0,1]");
  }
}

double reduced_capital(std::span<const AgentProfile> agents, std::size_t agent) {
  detail::require(agent < agents.size(), "reduced_capital: agent out of range");
  const double n = static_cast<double>(agents.size());
  double others = 0.0;
  for (std::size_t j = 0; j < agents.size(); ++j)
    if (j != agent) others += agents[j].initial_capital;
  return agents[agent].initial_capital -
         agents[agent].competition_weight / n * others;
}

std::vector<FeasibilityReport> check_feasibility(std::span<const AgentProfile> agents) {
  detail::require(!agents.empty(), "check_feasibility: the agent list is empty");
  std::vector<double> w;
  for (const auto& a : agents) w.push_back(a.competition_weight);
  validate_weights(w);

  const double n = static_cast<double>(agents.size());
  double total = 0.0;
  for (const auto& a : agents) total += a.initial_capital;

  std::vector<FeasibilityReport> out(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    auto& r = out[i];
    r.reduced_capital = reduced_capital(agents, i);
    r.feasible = in_domain(agents[i].utility.domain(),
                           r.reduced_capital + agents[i].utility.capital_shift());
    if (total > 0.0) {
      r.capital_share = agents[i].initial_capital / total;
      r.theta_upper_bound =
          r.capital_share >= 1.0
              ? 1.0
              : std::clamp(n * r.capital_share / (1.0 - r.capital_share), 0.0, 1.0);
    } else {
      r.capital_share = 0.0;
      r.theta_upper_bound = 1.0;
    }
  }
  return out;
}

std::vector<FeasibilityReport> check_feasibility(const GameSpec& game) {
  return check_feasibility(std::span<const AgentProfile>(game.agents));
}

double theta_hat(std::span<const double> weights) {
  validate_weights(weights);
  const double n = static_cast<double>(weights.size());
  double s = 0.0;
  for (double t : weights) s += t / (n + t);
  return s;
}

namespace detail {

std::vector<double> nash_coefficients_unchecked(std::span<const double> own,
                                                std::span<const double> weights) {
  require(own.size() == weights.size() && !own.empty(),
          "nash_coefficients: one value per agent is required");
  const double n = static_cast<double>(weights.size());
  double th = 0.0;
  double pooled = 0.0;
  for (std::size_t j = 0; j < own.size(); ++j) {
    th += weights[j] / (n + weights[j]);
    pooled += n / (n + weights[j]) * own[j];
  }
  const double slack = 1.0 - th;
  require(slack != 0.0, "nash_coefficients: 1 - theta_hat vanishes");
  std::vector<double> out(own.size());
  for (std::size_t i = 0; i < own.size(); ++i) {
    const double ti = weights[i];
    out[i] = n / (n + ti) * own[i] + ti / ((n + ti) * slack) * pooled;
  }
  return out;
}

}  // namespace detail

std::vector<double> nash_coefficients(std::span<const double> own,
                                      std::span<const double> weights) {
  validate_weights(weights);
  return detail::nash_coefficients_unchecked(own, weights);
}

std::vector<StrategyProcess> aggregate_nash(std::span<const StrategyProcess> psi_star,
                                            std::span<const double> weights) {
  require_common_shape(psi_star, weights.size(), "aggregate_nash");
  const double th = theta_hat(weights);
  const double n = static_cast<double>(weights.size());
  const std::size_t len = psi_star.front().values().size();

  std::vector<double> own_scale(weights.size());
  std::vector<double> pooled_scale(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    own_scale[i] = n / (n + weights[i]);
    pooled_scale[i] = weights[i] / ((n + weights[i]) * (1.0 - th));
  }

  // sum_j n/(n+theta_j) psi_j, pointwise.
  std::vector<double> pooled(len, 0.0);
  for (std::size_t j = 0; j < psi_star.size(); ++j) {
    const auto v = psi_star[j].values();
    for (std::size_t x = 0; x < len; ++x) pooled[x] += own_scale[j] * v[x];
  }

  std::vector<StrategyProcess> phi(psi_star.begin(), psi_star.end());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    auto out = phi[i].values();
    const auto in = psi_star[i].values();
    for (std::size_t x = 0; x < len; ++x)
      out[x] = own_scale[i] * in[x] + pooled_scale[i] * pooled[x];
  }
  return phi;
}

double verify_linear_system(std::span<const StrategyProcess> phi,
                            std::span<const StrategyProcess> psi_star,
                            std::span<const double> weights) {
  require_common_shape(phi, weights.size(), "verify_linear_system");
  require_common_shape(psi_star, weights.size(), "verify_linear_system");
  detail::require(phi.front().same_shape(psi_star.front()),
                  "verify_linear_system: phi and psi* shapes differ");
  const double n = static_cast<double>(weights.size());
  const std::size_t len = phi.front().values().size();

  std::vector<double> total(len, 0.0);
  for (const auto& p : phi) {
    const auto v = p.values();
    for (std::size_t x = 0; x < len; ++x) total[x] += v[x];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto ph = phi[i].values();
    const auto ps = psi_star[i].values();
    for (std::size_t x = 0; x < len; ++x) {
      const double others = total[x] - ph[x];
      const double r = ps[x] - ph[x] + weights[i] / n * others;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

std::vector<StrategyProcess> solve_linear_system_direct(
    std::span<const StrategyProcess> psi_star, std::span<const double> weights) {
  require_common_shape(psi_star, weights.size(), "solve_linear_system_direct");
  validate_weights(weights);
  const auto n = static_cast<Eigen::Index>(weights.size());
  const double nd = static_cast<double>(weights.size());
  const auto len = static_cast<Eigen::Index>(psi_star.front().values().size());

  // Row i: phi_i - (theta_i/n) sum_{j != i} phi_j = psi_i.
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = i == j ? 1.0 : -weights[static_cast<std::size_t>(i)] / nd;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(std::abs(lu.determinant()) > 0.0)) {
    throw SolverError("solve_linear_system_direct: singular system", 0.0);
  }

  Eigen::MatrixXd rhs(n, len);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = psi_star[static_cast<std::size_t>(i)].values();
    for (Eigen::Index x = 0; x < len; ++x) rhs(i, x) = v[static_cast<std::size_t>(x)];
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);

  std::vector<StrategyProcess> phi(psi_star.begin(), psi_star.end());
  for (Eigen::Index i = 0; i < n; ++i) {
    auto out = phi[static_cast<std::size_t>(i)].values();
    for (Eigen::Index x = 0; x < len; ++x) out[static_cast<std::size_t>(x)] = sol(i, x);
  }
  return phi;
}

}  // namespace relnash
