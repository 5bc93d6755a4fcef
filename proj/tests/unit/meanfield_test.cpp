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

#include "relnash/errors.hpp"
#include "relnash/game.hpp"
#include "relnash/meanfield.hpp"
#include "relnash/simulation.hpp"

namespace relnash {
namespace {

BlackScholesParams bs1() {
  return {Eigen::VectorXd::Constant(1, 0.05), Eigen::MatrixXd::Constant(1, 1, 0.2),
          Eigen::VectorXd::Constant(1, 1.0)};
}

PopulationSpec two_atoms(double theta) {
  PopulationSpec p;
  p.atoms = {{1.0, 1.0, theta, 0.5}, {1.0, 2.0, theta, 0.5}};
  return p;
}

TEST(MeanFieldTest, ZeroWeightsGiveSingleAgentOptima) {
  const auto mfe = mf_equilibrium(two_atoms(0.0), bs1(), 1.0);
  for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(mfe.phi_amounts[a][0], mfe.psi_amounts[a][0]);
}

TEST(MeanFieldTest, TwoAtomClosedForm) {
  const auto mfe = mf_equilibrium(two_atoms(0.5), bs1(), 1.0);
  EXPECT_NEAR(mfe.phi_amounts[0][0], 3.125, 1e-10);
  EXPECT_NEAR(mfe.phi_amounts[1][0], 4.375, 1e-10);
  // (delta + mean(delta) theta / (1 - mean(theta))) mu / sigma^2.
  for (std::size_t a = 0; a < 2; ++a) {
    const double d = mfe.support[a].delta;
    EXPECT_NEAR(mfe.phi_amounts[a][0], (d + 1.5 * 0.5 / 0.5) * 0.05 / 0.04, 1e-12);
  }
}

TEST(MeanFieldTest, PointMassIsLimitOfSymmetricGame) {
  PopulationSpec p;
  p.atoms = {{2.0, 1.3, 0.6, 1.0}};
  const auto mfe = mf_equilibrium(p, bs1(), 1.0);
  // Symmetric n-agent constant written out: theta_hat = n theta / (n + theta).
  const double n = 1e12, d = 1.3, t = 0.6;
  const double th = n * t / (n + t);
  const double c = n / (n + t) * d + t / ((n + t) * (1.0 - th)) * n * (n / (n + t) * d);
  EXPECT_NEAR(mfe.phi_amounts[0][0], c * 1.25, 1e-10);
}

TEST(MeanFieldTest, MonotoneInWeight) {
  PopulationSpec lo = two_atoms(0.3), hi = two_atoms(0.3);
  hi.atoms[0].theta = 0.6;
  hi.atoms[1].theta = 0.4;
  const auto a = mf_equilibrium(lo, bs1(), 1.0);
  const auto b = mf_equilibrium(hi, bs1(), 1.0);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_GT(b.phi_amounts[j][0], a.phi_amounts[j][0]);
}

TEST(MeanFieldTest, Validation) {
  PopulationSpec p = two_atoms(1.0);
  EXPECT_THROW(mf_equilibrium(p, bs1(), 1.0), InvalidInput);
  p = two_atoms(0.5);
  p.atoms[0].prob = 0.7;
  EXPECT_THROW(validate(p), InvalidInput);
  PopulationSpec s;
  s.capital = Marginal::constant(1.0);
  s.delta = Marginal::uniform(0.5, 2.0);
  s.theta = Marginal::uniform(0.0, 1.2);
  EXPECT_THROW(validate(s), InvalidInput);
  s.theta = Marginal::uniform(0.0, 1.0);
  EXPECT_NO_THROW(validate(s));
}

TEST(FixedPointTest, ZeroWeights) {
  const auto mfe = mf_equilibrium(two_atoms(0.0), bs1(), 1.0);
  const auto paths = simulate_bs(bs1(), 1.0, 10, 1000, 3);
  EXPECT_LE(mf_fixed_point_check(mfe, paths).residual, 1e-12);
}

TEST(FixedPointTest, TwoAtomsExact) {
  const auto mfe = mf_equilibrium(two_atoms(0.5), bs1(), 1.0);
  const auto paths = simulate_bs(bs1(), 1.0, 10, 1000, 4);
  const auto r = mf_fixed_point_check(mfe, paths);
  EXPECT_TRUE(r.exact);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(FixedPointTest, HeterogeneousCapitalAtoms) {
  PopulationSpec p;
  p.atoms = {{1.0, 1.0, 0.2, 0.25}, {3.0, 0.5, 0.9, 0.25}, {0.5, 2.0, 0.0, 0.5}};
  const auto mfe = mf_equilibrium(p, bs1(), 1.0);
  const auto paths = simulate_bs(bs1(), 1.0, 10, 500, 5);
  EXPECT_LE(mf_fixed_point_check(mfe, paths).residual, 1e-10);
}

TEST(FixedPointTest, SampledPopulationWithinSamplingError) {
  PopulationSpec s;
  s.capital = Marginal::uniform(0.5, 1.5);
  s.delta = Marginal::atoms({1.0, 2.0}, {0.5, 0.5});
  s.theta = Marginal::uniform(0.0, 1.0);
  s.samples = 10000;
  s.seed = 17;
  const auto mfe = mf_equilibrium(s, bs1(), 1.0);
  EXPECT_TRUE(mfe.sampled);
  const auto paths = simulate_bs(bs1(), 1.0, 10, 200, 6);
  const auto r = mf_fixed_point_check(mfe, paths);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_LE(r.residual, 3.0 * r.std_error);
}

TEST(FixedPointTest, PowerUtilityPathwise) {
  PopulationSpec p;
  p.utility = UtilityKind::kPower;
  p.atoms = {{1.0, 2.0, 0.5, 0.5}, {2.0, 3.0, 0.2, 0.5}};
  const auto mfe = mf_equilibrium(p, bs1(), 1.0);
  EXPECT_FALSE(mfe.constant_in_time);
  const auto paths = simulate_bs(bs1(), 1.0, 20, 100, 7);
  EXPECT_LE(mf_fixed_point_check(mfe, paths).residual, 1e-10);
}

TEST(ConvergenceTest, PointMassDecaysLikeOneOverN) {
  PopulationSpec p;
  p.atoms = {{1.0, 1.0, 0.5, 1.0}};
  const auto curve = n_agent_to_mf_convergence(p, bs1(), 1.0, {10, 100, 1000}, 1, 1);
  EXPECT_TRUE(curve.strictly_decreasing);
  EXPECT_NEAR(curve.slope, -1.0, 0.05);
}

TEST(ConvergenceTest, ZeroWeightsHaveNoError) {
  const auto curve = n_agent_to_mf_convergence(two_atoms(0.0), bs1(), 1.0, {5, 50}, 3, 2);
  for (const auto& pt : curve.points) EXPECT_EQ(pt.error.mean, 0.0);
}

TEST(ConvergenceTest, LargerGamesAreCloser) {
  const auto curve = n_agent_to_mf_convergence(two_atoms(0.5), bs1(), 1.0, {10, 1000}, 50, 3);
  EXPECT_LT(curve.points[1].error.mean, curve.points[0].error.mean);
}

TEST(ConvergenceTest, InfeasibleDrawsAreRedrawn) {
  PopulationSpec p;
  p.utility = UtilityKind::kPower;
  // Limit reduced capital 1 - 0.65 * 1.5 > 0, but a 10-agent draw with many
  // rich neighbours leaves a low-capital agent with nonpositive reduced capital.
  p.atoms = {{1.0, 2.0, 0.65, 0.5}, {2.0, 2.0, 0.0, 0.5}};
  const auto curve = n_agent_to_mf_convergence(p, bs1(), 1.0, {10}, 40, 4);
  EXPECT_GT(curve.points[0].resamples, 0u);
}

TEST(ThetaHatTest, SandwichedBySampleMean) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {10u, 100u, 1000u}) {
    std::vector<double> w(n);
    double mean = 0.0;
    for (auto& x : w) {
      x = u(rng);
      mean += x / n;
    }
    const double th = theta_hat(w);
    EXPECT_LE(mean * n / (n + 1.0), th + 1e-15);
    EXPECT_LE(th, mean + 1e-15);
  }
}

}  // namespace
}  // namespace relnash
