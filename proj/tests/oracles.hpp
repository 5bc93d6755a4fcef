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

// Test-side reference computations. Nothing here calls into the library.

#ifndef RELNASH_TESTS_ORACLES_HPP_
#define RELNASH_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Straight from the definition, one agent at a time.
inline double reduced_capital(const std::vector<double>& x0, const std::vector<double>& theta,
                              std::size_t i) {
  double others = 0.0;
  for (std::size_t j = 0; j < x0.size(); ++j)
    if (j != i) others += x0[j];
  return x0[i] - theta[i] / static_cast<double>(x0.size()) * others;
}

// Solves psi_i = phi_i - (theta_i/n) sum_{j != i} phi_j by Gauss-Seidel on
// phi = psi + B phi; the rows of B sum to (n-1) theta_i / n < 1.
inline std::vector<double> nash_by_iteration(const std::vector<double>& psi,
                                             const std::vector<double>& theta) {
  const std::size_t n = psi.size();
  std::vector<double> phi(psi);
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double others = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) others += phi[j];
      const double next = psi[i] + theta[i] / static_cast<double>(n) * others;
      change = std::max(change, std::abs(next - phi[i]));
      phi[i] = next;
    }
    if (change < 1e-15) break;
  }
  return phi;
}

// All 2^N binomial outcomes: probability and the sum of simple returns
// sum_m (S_{m+1} - S_m) / S_m, which is u - 1 or d - 1 per step.
struct BinomialOutcome {
  double prob;
  double return_sum;
  double terminal_price;
};

inline std::vector<BinomialOutcome> binomial_outcomes(double u, double d, double p,
                                                      double s0, int steps) {
  std::vector<BinomialOutcome> out;
  for (int mask = 0; mask < (1 << steps); ++mask) {
    double prob = 1.0, ret = 0.0, s = s0;
    for (int m = 0; m < steps; ++m) {
      const bool up = ((mask >> m) & 1) == 0;
      prob *= up ? p : 1.0 - p;
      ret += up ? u - 1.0 : d - 1.0;
      s *= up ? u : d;
    }
    out.push_back({prob, ret, s});
  }
  return out;
}

// E[L^a 1{L < c}] for L = exp(-k W_T - k^2 T / 2).
inline double lognormal_partial_moment(double a, double c, double k, double t) {
  const double m = -0.5 * k * k * t;
  const double s = k * std::sqrt(t);
  if (c <= 0.0) return 0.0;
  return std::exp(a * m + 0.5 * a * a * s * s) * phi_cdf((std::log(c) - m - a * s * s) / s);
}

// E[L_T Y*(L_T)] where Y* = xi + (b gamma / (lambda L))^{1/(1-gamma)} below
// the cut level c and 0 above it.
inline double cpt_budget(double lambda, double cut, double b, double gamma, double xi,
                         double k, double t) {
  const double p = 1.0 / (1.0 - gamma);
  return xi * lognormal_partial_moment(1.0, cut, k, t) +
         std::pow(b * gamma / lambda, p) * lognormal_partial_moment(1.0 - p, cut, k, t);
}

// argmax over y >= 0 of U(y) - lambda L y for the S-shaped utility. The
// Lagrangian is convex on [0, xi], so only y = 0 and the stationary point of
// the gain branch can win.
inline double cpt_pointwise_argmax(double lambda_l, double a, double b, double gamma,
                                   double delta_loss, double xi) {
  auto lagrangian = [&](double y) {
    const double u = y <= xi ? -a * std::pow(xi - y, delta_loss) : b * std::pow(y - xi, gamma);
    return u - lambda_l * y;
  };
  const double interior = xi + std::pow(b * gamma / lambda_l, 1.0 / (1.0 - gamma));
  return lagrangian(interior) > lagrangian(0.0) ? interior : 0.0;
}

}  // namespace oracle

#endif  // RELNASH_TESTS_ORACLES_HPP_
