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

#ifndef RELNASH_CPT_HPP_
#define RELNASH_CPT_HPP_

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "relnash/utility.hpp"

namespace relnash {

struct CptConfig {
  // Relative tolerance and bisection depth of the adaptive Gauss-Kronrod
  // quadrature over the gain region.
  double quadrature_tolerance = 1e-13;
  unsigned max_depth = 20;
  // Relative tolerance of the budget constraint in the multiplier search.
  double budget_tolerance = 1e-10;
  std::size_t max_iterations = 500;
  // Step in log state-price density for the finite-difference delta.
  double fd_log_step = 1e-4;
};

// Optimal terminal wealth of the prospect-theory investor in a
// one-dimensional Black-Scholes market, obtained by the martingale method:
// pointwise maximization of U(y) - lambda L y over y >= 0 for each
// terminal state-price density L, with lambda fixed by E[L Y] = budget.
//
// The pointwise maximizer is
//   Y*(L) = xi + (b gamma / (lambda L))^{1/(1-gamma)}   if lambda L < u_bar
//   Y*(L) = 0                                            otherwise,
// where u_bar is where the gain branch and the floor Y = 0 give the same
// Lagrangian value.
class CptSolution {
 public:
  CptSolution(double mu, double sigma, double s0, double horizon,
              const CptParams& params, double budget, const CptConfig& config);

  const CptParams& params() const { return params_; }
  double budget() const { return budget_; }
  double horizon() const { return horizon_; }
  // mu / sigma.
  double market_price_of_risk() const { return kappa_; }
  double lagrange_multiplier() const { return lambda_; }
  // Density level above which the loss branch (Y = 0) is optimal.
  double threshold_density() const { return u_bar_ / lambda_; }
  // Relative error of the computed E[L Y*] against the budget.
  double budget_residual() const { return budget_residual_; }
  std::size_t iterations() const { return iterations_; }

  double optimal_terminal_wealth(double density) const;

  // E[(L_T / L_t) Y*(L_T) | L_t = density] with tau = T - t.
  double value(double tau, double density) const;

  // Currency amount in the stock at time t (< T) when L_t = density.
  double invested_amount(double t, double density) const;
  double initial_amount() const { return invested_amount(0.0, 1.0); }
  double initial_fraction() const { return initial_amount() / budget_; }

  // State-price density implied by a stock price at time t.
  double density_at(double t, double price) const;

  // E[U(Y*)] by quadrature.
  double expected_utility() const;

  // (L, Y*(L)) at equal-probability quantiles of L_T.
  std::vector<std::pair<double, double>> terminal_profile(std::size_t nodes) const;

 private:
  // Integrates f(l, Y*(density * l)) over the gain region, where
  // l = L_T / L_t is lognormal over tau years, in the Gaussian driver of l.
  // Optionally reports the region's probability.
  double integrate_gain(double tau, double density,
                        const std::function<double(double, double)>& f,
                        double* region_probability = nullptr) const;
  double budget_for(double lambda) const;

  double mu_;
  double sigma_;
  double s0_;
  double horizon_;
  CptParams params_;
  double budget_;
  CptConfig config_;
  double kappa_;
  double u_bar_ = 0.0;
  double lambda_ = 0.0;
  double budget_residual_ = 0.0;
  std::size_t iterations_ = 0;
};

}  // namespace relnash

#endif  // RELNASH_CPT_HPP_
