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
#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relnash/equilibrium.hpp"
#include "relnash/errors.hpp"
#include "relnash/simulation.hpp"

namespace relnash {
namespace {

BlackScholesParams bs1(double mu = 0.05, double sigma = 0.2) {
  return {Eigen::VectorXd::Constant(1, mu), Eigen::MatrixXd::Constant(1, 1, sigma),
          Eigen::VectorXd::Constant(1, 1.0)};
}

GameSpec exp_game(const MarketModel& market, std::vector<double> x0, std::vector<double> theta,
                  std::vector<double> delta) {
  GameSpec g;
  g.market = market;
  for (std::size_t i = 0; i < x0.size(); ++i)
    g.agents.push_back({x0[i], theta[i], UtilitySpec::exponential(delta[i])});
  return g;
}

StrategyProcess shares(double v) {
  return StrategyProcess::constant(std::vector<double>{v}, Quantity::kShares);
}

TEST(WealthTest, ZeroStrategyKeepsCapital) {
  const auto paths = simulate_bs(bs1(), 1.0, 10, 20, 1);
  const std::vector<StrategyProcess> s{shares(0.0)};
  const auto w = wealth_paths(s, paths, std::vector<double>{3.0}, true);
  for (double x : w.terminal[0]) EXPECT_EQ(x, 3.0);
  for (double x : w.trajectories[0]) EXPECT_EQ(x, 3.0);
}

TEST(WealthTest, OneShareTelescopes) {
  const auto paths = simulate_bs(bs1(), 1.0, 30, 20, 2);
  const std::vector<StrategyProcess> s{shares(1.0)};
  const auto w = wealth_paths(s, paths, std::vector<double>{2.0});
  for (std::size_t p = 0; p < 20; ++p)
    EXPECT_NEAR(w.terminal[0][p], 2.0 + paths.price(p, 30, 0) - 1.0, 1e-13);
}

TEST(WealthTest, SelfFinancingRecursion) {
  const auto paths = simulate_bs(bs1(), 1.0, 12, 6, 3);
  StrategyProcess h(6, 12, 1, Quantity::kShares);
  for (std::size_t p = 0; p < 6; ++p)
    for (std::size_t m = 0; m < 12; ++m) h(p, m, 0) = std::cos(0.3 * p + m);
  const std::vector<StrategyProcess> s{h};
  const auto w = wealth_paths(s, paths, std::vector<double>{1.0}, true);
  for (std::size_t p = 0; p < 6; ++p) {
    double x = 1.0;
    for (std::size_t m = 0; m < 12; ++m) {
      EXPECT_NEAR(w.trajectories[0][p * 13 + m], x, 1e-14);
      x += h(p, m, 0) * (paths.price(p, m + 1, 0) - paths.price(p, m, 0));
    }
    EXPECT_NEAR(w.terminal[0][p], x, 1e-13);
    EXPECT_NEAR(w.trajectories[0][p * 13 + 12], x, 1e-13);
  }
}

TEST(WealthTest, LinearInStrategy) {
  const auto paths = simulate_bs(bs1(), 1.0, 8, 10, 4);
  StrategyProcess a(10, 8, 1, Quantity::kShares), b(10, 8, 1, Quantity::kShares);
  for (std::size_t p = 0; p < 10; ++p)
    for (std::size_t m = 0; m < 8; ++m) {
      a(p, m, 0) = std::sin(p + 0.1 * m);
      b(p, m, 0) = 0.5 - 0.05 * m;
    }
  const double ca = 1.7, cb = -0.4, x0 = 2.0;
  StrategyProcess mix(10, 8, 1, Quantity::kShares);
  for (std::size_t j = 0; j < mix.values().size(); ++j)
    mix.values()[j] = ca * a.values()[j] + cb * b.values()[j];
  const std::vector<StrategyProcess> s{a, b, mix};
  const auto w = wealth_paths(s, paths, std::vector<double>{x0, x0, x0});
  for (std::size_t p = 0; p < 10; ++p)
    EXPECT_NEAR(w.terminal[2][p],
                ca * w.terminal[0][p] + cb * w.terminal[1][p] - (ca + cb - 1.0) * x0, 1e-12);
}

TEST(WealthTest, AmountsMatchShares) {
  const auto paths = simulate_bs(bs1(), 1.0, 8, 10, 5);
  const auto amounts = StrategyProcess::constant(std::vector<double>{1.25}, Quantity::kAmounts);
  const std::vector<StrategyProcess> s{amounts, to_shares(amounts, paths)};
  const auto w = wealth_paths(s, paths, std::vector<double>{0.0, 0.0});
  for (std::size_t p = 0; p < 10; ++p) EXPECT_NEAR(w.terminal[0][p], w.terminal[1][p], 1e-13);
}

TEST(WealthTest, ShapeMismatchThrows) {
  const auto paths = simulate_bs(bs1(), 1.0, 8, 10, 5);
  const std::vector<StrategyProcess> s{StrategyProcess(3, 8, 1, Quantity::kShares)};
  EXPECT_THROW(wealth_paths(s, paths, std::vector<double>{0.0}), InvalidInput);
}

TEST(RelativeUtilityTest, ZeroStrategiesClassicalAgent) {
  const auto paths = simulate_bs(bs1(), 1.0, 4, 50, 6);
  const auto g = exp_game(bs1(), {1.5, 2.0}, {0.0, 1.0}, {2.0, 1.0});
  const std::vector<StrategyProcess> s{shares(0.0), shares(0.0)};
  const auto w = wealth_paths(s, paths, g.initial_capitals());
  const auto e = expected_relative_utility(0, w, paths, g);
  EXPECT_DOUBLE_EQ(e.mean, -std::exp(-1.5 / 2.0));
  EXPECT_NEAR(e.std_error, 0.0, 1e-15);
  const auto e2 = expected_relative_utility(1, w, paths, g);
  EXPECT_DOUBLE_EQ(e2.mean, -std::exp(-(2.0 - 0.5 * 1.5)));
}

TEST(RelativeUtilityTest, TwoStepTreeByHand) {
  const CRRParams c{2.0, 0.5, 0.6, 1.0, 2};
  const auto tree = build_crr_tree(c, 1.0);
  const auto g = exp_game(c, {1.0, 1.0}, {0.5, 0.0}, {1.0, 2.0});
  const std::vector<StrategyProcess> s{
      StrategyProcess::constant(std::vector<double>{0.7}, Quantity::kAmounts),
      StrategyProcess::constant(std::vector<double>{-0.2}, Quantity::kAmounts)};
  const auto w = wealth_paths(s, tree, g.initial_capitals());
  const auto e = expected_relative_utility(0, w, tree, g);
  EXPECT_TRUE(e.exact);
  EXPECT_EQ(e.std_error, 0.0);

  double expected = 0.0;
  for (const auto& o : oracle::binomial_outcomes(2.0, 0.5, 0.6, 1.0, 2)) {
    const double x1 = 1.0 + 0.7 * o.return_sum;
    const double x2 = 1.0 - 0.2 * o.return_sum;
    expected += o.prob * -std::exp(-(x1 - 0.25 * x2));
  }
  EXPECT_NEAR(e.mean, expected, 1e-15);
}

TEST(RelativeUtilityTest, IdenticalFullWeightAgents) {
  const auto paths = simulate_bs(bs1(), 1.0, 4, 100, 7);
  const auto g = exp_game(bs1(), {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0});
  const std::vector<StrategyProcess> s{shares(0.8), shares(0.8)};
  const auto w = wealth_paths(s, paths, g.initial_capitals());
  const auto rel = relative_wealth(0, w, g);
  for (std::size_t p = 0; p < 100; ++p) EXPECT_NEAR(rel[p], 0.5 * w.terminal[0][p], 1e-15);
}

TEST(RelativeUtilityTest, DomainViolationsCounted) {
  const auto paths = simulate_bs(bs1(), 1.0, 4, 200, 8);
  GameSpec g;
  g.market = bs1();
  g.agents.push_back({0.1, 0.0, UtilitySpec::power(2.0)});
  const std::vector<StrategyProcess> s{shares(5.0)};
  const auto w = wealth_paths(s, paths, g.initial_capitals());
  const auto e = expected_relative_utility(0, w, paths, g);
  EXPECT_GT(e.domain_violations, 0u);
  EXPECT_EQ(e.mean, -std::numeric_limits<double>::infinity());
}

TEST(BestResponseTest, ExhaustiveTreeEquilibriumIsGridArgmax) {
  const CRRParams c{2.0, 0.5, 0.6, 1.0, 4};
  const auto g = exp_game(c, {1.0, 1.0}, {0.5, 0.5}, {1.0, 2.0});
  const auto eq = solve_equilibrium(g);
  const auto tree = build_crr_tree(c, 1.0);
  const auto real = realize_equilibrium(eq, g, tree);
  const std::vector<DeviationGrid> grids{DeviationGrid::additive(-1.0, 1.0, 0.01),
                                         DeviationGrid::multiplicative(0.5, 1.5, 0.01)};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto r = best_response_gap(i, real.phi, grids, tree, g);
    EXPECT_TRUE(r.exact);
    EXPECT_TRUE(r.pass) << "agent " << i << " gap " << r.max_improvement;
    EXPECT_LE(r.max_improvement, 1e-12);
  }
}

TEST(BestResponseTest, ExhaustiveGapAgainstBruteForce) {
  // Agent 0's utility along the additive grid, recomputed from the outcomes.
  const CRRParams c{2.0, 0.5, 0.6, 1.0, 4};
  const auto g = exp_game(c, {1.0, 1.0}, {0.5, 0.5}, {1.0, 2.0});
  const auto eq = solve_equilibrium(g);
  const double phi0 = eq.phi_star[0](0, 0, 0), phi1 = eq.phi_star[1](0, 0, 0);
  const auto outcomes = oracle::binomial_outcomes(2.0, 0.5, 0.6, 1.0, 4);
  auto eu = [&](double a0) {
    double s = 0.0;
    for (const auto& o : outcomes)
      s += o.prob * -std::exp(-((1.0 + a0 * o.return_sum) - 0.25 * (1.0 + phi1 * o.return_sum)));
    return s;
  };
  const auto tree = build_crr_tree(c, 1.0);
  const auto real = realize_equilibrium(eq, g, tree);
  const std::vector<DeviationGrid> grids{DeviationGrid::additive(-0.3, 0.3, 0.1)};
  const auto r = best_response_gap(0, real.phi, grids, tree, g);
  ASSERT_EQ(r.entries.size(), 7u);
  for (const auto& e : r.entries)
    EXPECT_NEAR(e.improvement.mean, eu(phi0 + e.value) - eu(phi0), 1e-14);
}

TEST(BestResponseTest, PerturbedEquilibriumFails) {
  const CRRParams c{2.0, 0.5, 0.6, 1.0, 4};
  const auto g = exp_game(c, {1.0, 1.0}, {0.5, 0.5}, {1.0, 2.0});
  const auto eq = solve_equilibrium(g);
  const auto tree = build_crr_tree(c, 1.0);
  auto phi = realize_equilibrium(eq, g, tree).phi;
  phi[0](0, 0, 0) += 0.5;
  const std::vector<DeviationGrid> grids{DeviationGrid::additive(-1.0, 1.0, 0.01)};
  const auto r = best_response_gap(0, phi, grids, tree, g);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.entries[r.worst].value, -0.5, 0.011);
}

TEST(BestResponseTest, TrivialGridHasZeroGap) {
  const auto g = exp_game(bs1(), {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0});
  const auto paths = simulate_bs(bs1(), 1.0, 10, 1000, 9);
  const auto eq = solve_equilibrium(g);
  const auto real = realize_equilibrium(eq, g, paths);
  const std::vector<DeviationGrid> grids{{DeviationFamily::kAdditiveAmount, {0.0}},
                                         {DeviationFamily::kMultiplicative, {1.0}}};
  const auto r = best_response_gap(0, real.phi, grids, paths, g);
  EXPECT_EQ(r.max_improvement, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(BestResponseTest, SummaryFieldsAgreeWithEntries) {
  const auto g = exp_game(bs1(), {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0});
  const auto paths = simulate_bs(bs1(), 1.0, 20, 20000, 12);
  const auto real = realize_equilibrium(solve_equilibrium(g), g, paths);
  const std::vector<DeviationGrid> grids{DeviationGrid::additive(-0.2, 0.2, 0.01),
                                         DeviationGrid::multiplicative(0.9, 1.1, 0.01)};
  const auto r = best_response_gap(0, real.phi, grids, paths, g);
  double best = -1e300, excess = -1e300;
  for (const auto& e : r.entries) {
    best = std::max(best, e.improvement.mean);
    excess = std::max(excess, e.improvement.mean - 3.0 * e.improvement.std_error);
  }
  EXPECT_EQ(r.max_improvement, best);
  EXPECT_EQ(r.max_excess, excess);
  const auto& w = r.entries[r.worst];
  EXPECT_EQ(w.improvement.mean - r.threshold, r.max_excess);
  EXPECT_EQ(r.pass, r.max_excess <= 0.0);
  // Sampling noise makes some deviation look slightly better on a fine grid.
  EXPECT_GT(r.max_improvement, 0.0);
}

TEST(BestResponseTest, MonteCarloBlackScholesPasses) {
  const auto g = exp_game(bs1(), {1.0, 1.0}, {1.0, 0.5}, {1.0, 2.0});
  const auto paths = simulate_bs(bs1(), 1.0, 20, 20000, 10);
  const auto eq = solve_equilibrium(g);
  const auto real = realize_equilibrium(eq, g, paths);
  const std::vector<DeviationGrid> grids{DeviationGrid::additive(-1.0, 1.0, 0.1),
                                         DeviationGrid::multiplicative(0.5, 1.5, 0.1)};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto r = best_response_gap(i, real.phi, grids, paths, g);
    EXPECT_FALSE(r.exact);
    EXPECT_TRUE(r.pass) << "agent " << i;
  }
}

TEST(BestResponseTest, GridsAlwaysContainEquilibrium) {
  const auto a = DeviationGrid::additive(0.05, 0.3, 0.1);
  EXPECT_NE(std::find(a.values.begin(), a.values.end(), 0.0), a.values.end());
  const auto m = DeviationGrid::multiplicative(0.5, 1.5, 0.25);
  EXPECT_EQ(std::count(m.values.begin(), m.values.end(), 1.0), 1);
}

TEST(MomentsTest, Examples) {
  const auto g = exp_game(bs1(), {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0});
  const auto m = bs_exp_moments(g);
  EXPECT_NEAR(m[0].aggregation_constant, 2.0, 1e-14);
  EXPECT_NEAR(m[0].expected_wealth, 1.0 + 2.0 * 0.0625, 1e-14);

  const auto solo = exp_game(bs1(), {1.0}, {0.0}, {1.0});
  const std::vector<std::optional<double>> k{1.0 - 1e-12};
  const auto ms = bs_exp_moments(solo, k);
  EXPECT_NEAR(*ms[0].loss_probability, oracle::phi_cdf(-0.25), 1e-10);
  EXPECT_NEAR(*ms[0].loss_probability, 0.4013, 1e-4);

  const auto classical = exp_game(bs1(), {2.0, 1.0}, {0.0, 0.3}, {1.5, 1.0});
  const auto mc = bs_exp_moments(classical);
  EXPECT_NEAR(mc[0].aggregation_constant, 1.5, 1e-15);
  EXPECT_NEAR(mc[0].expected_wealth, 2.0 + 1.5 * 0.0625, 1e-14);
}

TEST(MomentsTest, ThresholdMustBeBelowCapital) {
  const auto g = exp_game(bs1(), {1.0}, {0.0}, {1.0});
  const std::vector<std::optional<double>> k{1.0};
  EXPECT_THROW(bs_exp_moments(g, k), InvalidInput);
}

TEST(MomentsTest, MonteCarloAgreement) {
  const auto g = exp_game(bs1(), {1.0, 1.0}, {0.7, 0.2}, {1.0, 2.0});
  const std::vector<std::optional<double>> k{0.9, 0.5};
  const auto closed = bs_exp_moments(g, k);
  const auto paths = simulate_bs(bs1(), 1.0, 4, 50000, 11);
  const auto eq = solve_equilibrium(g);
  const auto real = realize_equilibrium(eq, g, paths);
  const auto w = wealth_paths(real.phi, paths, g.initial_capitals());
  for (std::size_t i = 0; i < 2; ++i) {
    const auto mean = wealth_mean(w.terminal[i], paths);
    EXPECT_NEAR(mean.mean, closed[i].expected_wealth, 3.0 * mean.std_error);
    const auto loss = loss_probability(w.terminal[i], *k[i], paths);
    EXPECT_NEAR(loss.mean, *closed[i].loss_probability, 3.0 * loss.std_error);
  }
}

TEST(ReparametrizationTest, HandExample) {
  const double n = 2.0;
  const double theta = 2.0 / 3.0;
  const std::vector<double> d{theta, theta}, t{theta, theta};
  const auto r = reparametrization_crosscheck(0.05, 0.2, d, t);
  // theta / (1 - theta / n) = 1 and the same for delta.
  EXPECT_NEAR(theta / (1.0 - theta / n), 1.0, 1e-15);
  EXPECT_NEAR(r.via_constants[0], 2.5, 1e-12);
  EXPECT_NEAR(r.via_formula[0], 2.5, 1e-12);
}

TEST(ReparametrizationTest, ZeroWeights) {
  const std::vector<double> d{1.0, 3.0}, t{0.0, 0.0};
  const auto r = reparametrization_crosscheck(0.05, 0.2, d, t);
  EXPECT_NEAR(r.via_constants[1], 3.0 * 1.25, 1e-14);
  EXPECT_NEAR(r.via_formula[1], 3.0 * 1.25, 1e-14);
}

TEST(ReparametrizationTest, RandomDraws) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    std::vector<double> d(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = 0.1 + 3.0 * u(rng);
      t[i] = u(rng);
    }
    EXPECT_LE(reparametrization_crosscheck(0.05, 0.2, d, t).max_difference, 1e-10);
  }
}

}  // namespace
}  // namespace relnash
