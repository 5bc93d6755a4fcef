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

#ifndef RELNASH_SOLVERS_HPP_
#define RELNASH_SOLVERS_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "relnash/cpt.hpp"
#include "relnash/markets.hpp"
#include "relnash/strategy.hpp"

namespace relnash {

// Deterministic amounts pi_k held in each stock at all times; shares are
// pi_k / S_k(t).
struct ConstantAmountPolicy {
  Eigen::VectorXd amounts;
};

// Constant fractions of current wealth: pi_k(t) = f_k Y_t.
struct ConstantFractionPolicy {
  Eigen::VectorXd fractions;
};

// Time-dependent fraction of wealth in the single stock: pi(t) = f(t) Y_t.
struct FractionFunctionPolicy {
  std::function<double(double)> fraction;
};

// Replicating strategy of the optimal prospect-theory terminal wealth.
struct CptPolicy {
  std::shared_ptr<const CptSolution> solution;
};

using Policy = std::variant<ConstantAmountPolicy, ConstantFractionPolicy,
                            FractionFunctionPolicy, CptPolicy>;

struct SolverDiagnostics {
  std::string method;
  std::size_t iterations = 0;
  double residual = 0.0;
};

// Optimal strategy of the classical single-agent problem.
struct SingleAgentSolution {
  Policy policy;
  // Initial capital of the single-agent problem (reduced capital, plus xi
  // for prospect-theory investors).
  double capital = 0.0;
  bool unique = false;
  SolverDiagnostics diagnostics;

  std::size_t assets() const;
  // Currency amounts held at t = 0.
  Eigen::VectorXd initial_amounts() const;
  // True when amounts are deterministic and constant in time.
  bool constant_amounts() const;
};

// Shares held on every path and step of `paths`, starting the wealth
// recursion from solution.capital.
StrategyProcess realize(const SingleAgentSolution& solution, const PathSet& paths);

// Full (path, step, asset) share array of `strategy` on `paths`; amounts are
// divided by the price at the start of each step.
StrategyProcess to_shares(const StrategyProcess& strategy, const PathSet& paths);

// Exponential utility in Black-Scholes: pi* = delta (sigma sigma^T)^{-1} mu.
SingleAgentSolution solve_exp_bs(const BlackScholesParams& params, double delta);

struct NewtonConfig {
  std::size_t max_iterations = 200;
  double tolerance = 1e-12;
  // Up to this many step halvings per iteration when the residual grows.
  std::size_t max_halvings = 40;
};

// First-order condition of the exponential investor in the jump market,
// componentwise:
//   mu_k - (1/delta) (sigma sigma^T pi)_k
//     + intensity sum_m prob_m z_mk (exp(-(1/delta) pi . z_m) - 1{|z_m| < 1}).
Eigen::VectorXd levy_first_order_residual(const LevyJumpParams& params,
                                          double delta, const Eigen::VectorXd& amounts);

// Solves the first-order condition by damped Newton from the no-jump
// closed form. `unique` is set when the Jacobian is negative definite at
// every iterate and a second start from zero lands on the same point.
SingleAgentSolution solve_exp_levy(const LevyJumpParams& params, double delta,
                                   const NewtonConfig& config = {});

// (log((1-q)/(1-p)) - log(q/p)) / (u - d): optimal amount per unit delta.
double crr_exp_amount_factor(const CRRParams& params);

SingleAgentSolution solve_exp_crr(const CRRParams& params, double delta);

// Power utility in Black-Scholes (risk tolerance delta): constant fractions
// delta (sigma sigma^T)^{-1} mu.
SingleAgentSolution solve_crra_bs(const BlackScholesParams& params, double delta,
                                  double capital);
// Same with U(x) = x^gamma / gamma: fractions (1/(1-gamma)) (sigma sigma^T)^{-1} mu.
// gamma = 0 is log utility.
SingleAgentSolution solve_crra_bs_gamma(const BlackScholesParams& params,
                                        double gamma, double capital);

// Deterministic correction f(t) added to the myopic fraction delta * lambda.
struct HestonAdjustment {
  std::function<double(double)> f;
  // Set when f is the exact optimal correction, not an approximation.
  bool exact = false;
};

// Power utility in the Heston model: fraction(t) = delta lambda + f(t), with
// f = 0 (myopic) unless supplied.
SingleAgentSolution solve_crra_heston(const HestonParams& params, double delta,
                                      double capital,
                                      const std::optional<HestonAdjustment>& f = {});

// Heston with kappa = vol_of_vol = 0 is Black-Scholes with drift lambda z0
// and volatility sqrt(z0).
BlackScholesParams heston_as_black_scholes(const HestonParams& params);

// Prospect-theory investor in a one-dimensional Black-Scholes market with
// budget reduced_capital + xi.
SingleAgentSolution solve_cpt_bs(const BlackScholesParams& params, double horizon,
                                 const CptParams& cpt, double reduced_capital,
                                 const CptConfig& config = {});

}  // namespace relnash

#endif  // RELNASH_SOLVERS_HPP_
