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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relnash/errors.hpp"
#include "relnash/game.hpp"

namespace relnash {
namespace {

std::vector<AgentProfile> power_agents(const std::vector<double>& x0,
                                       const std::vector<double>& theta) {
  std::vector<AgentProfile> out;
  for (std::size_t i = 0; i < x0.size(); ++i)
    out.push_back({x0[i], theta[i], UtilitySpec::power(2.0)});
  return out;
}

StrategyProcess constant(std::vector<double> v) {
  return StrategyProcess::constant(v, Quantity::kAmounts);
}

TEST(FeasibilityTest, FullWeightEqualCapital) {
  const auto r = check_feasibility(power_agents({1.0, 1.0}, {1.0, 0.0}));
  EXPECT_DOUBLE_EQ(r[0].reduced_capital, 0.5);
  EXPECT_TRUE(r[0].feasible);
  EXPECT_DOUBLE_EQ(r[1].reduced_capital, 1.0);
}

TEST(FeasibilityTest, ZeroWeightKeepsCapital) {
  const auto r = check_feasibility(power_agents({3.0, 7.0, 2.0}, {0.0, 0.0, 0.0}));
  EXPECT_DOUBLE_EQ(r[0].reduced_capital, 3.0);
  EXPECT_DOUBLE_EQ(r[1].reduced_capital, 7.0);
  EXPECT_TRUE(r[2].feasible);

  const auto neg = check_feasibility(power_agents({-1.0}, {0.0}));
  EXPECT_FALSE(neg[0].feasible);
}

TEST(FeasibilityTest, RichPeerMakesAgentInfeasible) {
  const auto r = check_feasibility(power_agents({1.0, 100.0}, {1.0, 0.0}));
  EXPECT_DOUBLE_EQ(r[0].reduced_capital, -49.0);
  EXPECT_FALSE(r[0].feasible);
  // n alpha / (1 - alpha) with alpha = 1/101.
  EXPECT_NEAR(r[0].theta_upper_bound, 2.0 * (1.0 / 101.0) / (100.0 / 101.0), 1e-15);
}

TEST(FeasibilityTest, ExponentialAgentsAreAlwaysFeasible) {
  std::vector<AgentProfile> agents{{1.0, 1.0, UtilitySpec::exponential(1.0)},
                                   {100.0, 0.0, UtilitySpec::exponential(1.0)}};
  EXPECT_TRUE(check_feasibility(agents)[0].feasible);
}

TEST(FeasibilityTest, BoundIsReportedNotEnforced) {
  const auto r = check_feasibility(power_agents({1.0, 3.0}, {1.0, 1.0}));
  // alpha = 1/4: bound 2 (1/4) / (3/4) = 2/3 < theta = 1, yet reduced capital is computed.
  EXPECT_NEAR(r[0].theta_upper_bound, 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(r[0].reduced_capital, -0.5);
  EXPECT_DOUBLE_EQ(r[1].theta_upper_bound, 1.0);
}

TEST(FeasibilityTest, MatchesDefinitionOnRandomGames) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> cap(0.1, 5.0), w(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<double> x0(n), th(n);
    for (std::size_t i = 0; i < n; ++i) {
      x0[i] = cap(rng);
      th[i] = w(rng);
    }
    const auto r = check_feasibility(power_agents(x0, th));
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = oracle::reduced_capital(x0, th, i);
      EXPECT_NEAR(r[i].reduced_capital, expected, 1e-12);
      EXPECT_EQ(r[i].feasible, expected > 0.0);
    }
  }
}

TEST(FeasibilityTest, EmptyListThrows) {
  EXPECT_THROW(check_feasibility(std::vector<AgentProfile>{}), InvalidInput);
}

TEST(ThetaHatTest, Examples) {
  EXPECT_EQ(theta_hat(std::vector<double>{0.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(theta_hat(std::vector<double>{1.0, 1.0}), 2.0 / 3.0, 1e-15);
  const std::vector<double> ten(10, 1.0);
  EXPECT_NEAR(theta_hat(ten), 10.0 / 11.0, 1e-15);
  EXPECT_LT(theta_hat(ten), 10.0 / 11.0 + 1e-15);
}

TEST(ThetaHatTest, RejectsWeightsOutsideUnitInterval) {
  EXPECT_THROW(theta_hat(std::vector<double>{0.5, 1.5}), InvalidInput);
  EXPECT_THROW(theta_hat(std::vector<double>{-0.1}), InvalidInput);
  EXPECT_THROW(theta_hat(std::vector<double>{std::nan("")}), InvalidInput);
}

TEST(AggregateTest, ZeroWeightsAreIdentity) {
  const std::vector<StrategyProcess> psi{constant({1.0, -2.0}), constant({0.5, 3.0})};
  const auto phi = aggregate_nash(psi, std::vector<double>{0.0, 0.0});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(phi[i](0, 0, k), psi[i](0, 0, k));
}

TEST(AggregateTest, SymmetricFullWeightDoubles) {
  const std::vector<StrategyProcess> psi{constant({1.7}), constant({1.7})};
  const auto phi = aggregate_nash(psi, std::vector<double>{1.0, 1.0});
  EXPECT_NEAR(phi[0](0, 0, 0), 3.4, 1e-14);
  EXPECT_NEAR(phi[1](0, 0, 0), 3.4, 1e-14);
}

TEST(AggregateTest, SingleAgent) {
  const std::vector<StrategyProcess> psi{constant({0.3, 0.4})};
  const auto phi = aggregate_nash(psi, std::vector<double>{0.0});
  EXPECT_EQ(phi[0](0, 0, 1), 0.4);
  EXPECT_EQ(verify_linear_system(phi, psi, std::vector<double>{0.0}), 0.0);
}

TEST(AggregateTest, MatchesIterativeOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.0, 1.0), v(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<double> th(n), raw(n);
    std::vector<StrategyProcess> psi;
    for (std::size_t i = 0; i < n; ++i) {
      th[i] = w(rng);
      raw[i] = v(rng);
      psi.push_back(constant({raw[i]}));
    }
    const auto phi = aggregate_nash(psi, th);
    const auto expected = oracle::nash_by_iteration(raw, th);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(phi[i](0, 0, 0), expected[i], 1e-10);
  }
}

TEST(AggregateTest, MismatchedShapesThrow) {
  const std::vector<StrategyProcess> psi{constant({1.0}), constant({1.0, 2.0})};
  EXPECT_THROW(aggregate_nash(psi, std::vector<double>{0.1, 0.2}), InvalidInput);
  const std::vector<StrategyProcess> two{constant({1.0}), constant({2.0})};
  EXPECT_THROW(aggregate_nash(two, std::vector<double>{0.1}), InvalidInput);
  const std::vector<StrategyProcess> mixed{
      constant({1.0}), StrategyProcess::constant(std::vector<double>{1.0}, Quantity::kShares)};
  EXPECT_THROW(aggregate_nash(mixed, std::vector<double>{0.1, 0.2}), InvalidInput);
}

TEST(AggregateTest, PathwiseProcesses) {
  std::vector<StrategyProcess> psi;
  for (int i = 0; i < 3; ++i) {
    StrategyProcess s(4, 5, 2, Quantity::kShares);
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t m = 0; m < 5; ++m)
        for (std::size_t k = 0; k < 2; ++k)
          s(p, m, k) = std::sin(static_cast<double>(i * 100 + p * 10 + m) + k);
    psi.push_back(s);
  }
  const std::vector<double> th{0.2, 0.9, 0.5};
  const auto phi = aggregate_nash(psi, th);
  EXPECT_LE(verify_linear_system(phi, psi, th), 1e-12);
  for (std::size_t p = 0; p < 4; ++p) {
    const std::vector<double> raw{psi[0](p, 3, 1), psi[1](p, 3, 1), psi[2](p, 3, 1)};
    const auto expected = oracle::nash_by_iteration(raw, th);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(phi[i](p, 3, 1), expected[i], 1e-10);
  }
}

TEST(LinearSystemTest, PerturbationShowsUpInOwnEquation) {
  const std::vector<double> th{0.0, 0.5};
  const std::vector<StrategyProcess> psi{constant({1.0}), constant({2.0})};
  auto phi = aggregate_nash(psi, th);
  EXPECT_LE(verify_linear_system(phi, psi, th), 1e-12);
  phi[0](0, 0, 0) += 1.0;
  // Agent 1 ignores agent 2; agent 2's equation moves by 0.5 only.
  EXPECT_NEAR(verify_linear_system(phi, psi, th), 1.0, 1e-12);
}

TEST(LinearSystemTest, IdentityWithZeroWeights) {
  const std::vector<StrategyProcess> psi{constant({1.0}), constant({-4.0})};
  EXPECT_EQ(verify_linear_system(psi, psi, std::vector<double>{0.0, 0.0}), 0.0);
}

TEST(DirectSolveTest, AgreesWithClosedForm) {
  const std::vector<std::vector<double>> weight_sets{{0.0, 0.0}, {1.0, 1.0}, {0.0}};
  for (const auto& th : weight_sets) {
    std::vector<StrategyProcess> psi;
    for (std::size_t i = 0; i < th.size(); ++i) psi.push_back(constant({1.0 + i, -0.5}));
    const auto a = aggregate_nash(psi, th);
    const auto b = solve_linear_system_direct(psi, th);
    for (std::size_t i = 0; i < th.size(); ++i)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(a[i](0, 0, k), b[i](0, 0, k), 1e-10);
  }
}

TEST(DirectSolveTest, RandomThreeAgentGames) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.0, 1.0), v(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> th{w(rng), w(rng), w(rng)};
    std::vector<StrategyProcess> psi{constant({v(rng)}), constant({v(rng)}), constant({v(rng)})};
    const auto a = aggregate_nash(psi, th);
    const auto b = solve_linear_system_direct(psi, th);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a[i](0, 0, 0), b[i](0, 0, 0), 1e-10);
  }
}

TEST(CoefficientsTest, SymmetricUnitGame) {
  const auto c = nash_coefficients(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 1.0});
  EXPECT_NEAR(c[0], 2.0, 1e-14);
  EXPECT_NEAR(c[1], 2.0, 1e-14);
}

TEST(GameSpecTest, Validation) {
  GameSpec g;
  g.market = BlackScholesParams{Eigen::VectorXd::Constant(1, 0.05),
                                Eigen::MatrixXd::Constant(1, 1, 0.2),
                                Eigen::VectorXd::Constant(1, 1.0)};
  EXPECT_THROW(validate(g), InvalidInput);
  g.agents.push_back({1.0, 0.5, UtilitySpec::exponential(1.0)});
  EXPECT_NO_THROW(validate(g));
  g.horizon = 0.0;
  EXPECT_THROW(validate(g), InvalidInput);
  g.horizon = 1.0;
  g.agents[0].competition_weight = 1.2;
  EXPECT_THROW(validate(g), InvalidInput);
}

}  // namespace
}  // namespace relnash
