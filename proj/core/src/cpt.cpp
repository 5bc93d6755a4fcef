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

#include "relnash/cpt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relnash/errors.hpp"
#include "relnash/numerics.hpp"

namespace relnash {

namespace {

// Root of the indifference condition between the gain branch and Y = 0 in
// terms of u = lambda * L:
//   (1/gamma - 1) u c(u) - u xi = -a xi^delta,   c(u) = (b gamma / u)^{1/(1-gamma)}.
// The left side is strictly decreasing from +inf to -inf.
double indifference_level(const CptParams& p) {
  const double k = 1.0 / (1.0 - p.gamma);
  const double floor_value = -p.a * std::pow(p.xi, p.delta_loss);
  auto gap = [&](double log_u) {
    const double u = std::exp(log_u);
    const double c = std::pow(p.b * p.gamma / u, k);
    return (1.0 / p.gamma - 1.0) * u * c - u * p.xi - floor_value;
  };
  double lo = 0.0;
  double hi = 0.0;
  while (gap(lo) <= 0.0) lo -= 1.0;
  while (gap(hi) > 0.0) hi += 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

CptSolution::CptSolution(double mu, double sigma, double s0, double horizon,
                         const CptParams& params, double budget,
                         const CptConfig& config)
    : mu_(mu),
      sigma_(sigma),
      s0_(s0),
      horizon_(horizon),
      params_(params),
      budget_(budget),
      config_(config),
      kappa_(mu / sigma) {
  detail::require(sigma > 0.0, "cpt solver: sigma must be positive");
  detail::require(horizon > 0.0, "cpt solver: horizon must be positive");
  detail::require(budget > 0.0 && std::isfinite(budget),
                  "cpt solver: budget x0_reduced + xi must be positive");
  detail::require(config.quadrature_tolerance > 0.0, "cpt solver: tolerance must be positive");
  UtilitySpec::cpt(params);  // validates the preference parameters

  u_bar_ = indifference_level(params_);

  // Budget is continuous and strictly decreasing in lambda: bracket in log
  // space, then bisect.
  double log_lo = 0.0;
  double log_hi = 0.0;
  std::size_t it = 0;
  while (budget_for(std::exp(log_lo)) <= budget_) {
    log_lo -= 1.0;
    if (++it > config_.max_iterations)
      throw SolverError("cpt solver: could not bracket the multiplier", 1.0);
  }
  while (budget_for(std::exp(log_hi)) > budget_) {
    log_hi += 1.0;
    if (++it > config_.max_iterations)
      throw SolverError("cpt solver: could not bracket the multiplier", 1.0);
  }
  double rel = std::numeric_limits<double>::infinity();
  double log_mid = 0.5 * (log_lo + log_hi);
  for (; it < config_.max_iterations; ++it) {
    log_mid = 0.5 * (log_lo + log_hi);
    const double b = budget_for(std::exp(log_mid));
    rel = (b - budget_) / budget_;
    if (std::abs(rel) < config_.budget_tolerance || log_hi - log_lo < 1e-15) break;
    (b > budget_ ? log_lo : log_hi) = log_mid;
  }
  iterations_ = it;
  lambda_ = std::exp(log_mid);
  budget_residual_ = std::abs(rel);
  if (!(budget_residual_ < 100.0 * config_.budget_tolerance)) {
    throw SolverError("cpt solver: budget bisection did not converge", budget_residual_);
  }
}

double CptSolution::optimal_terminal_wealth(double density) const {
  const double u = lambda_ * density;
  if (!(u < u_bar_)) return 0.0;
  const double k = 1.0 / (1.0 - params_.gamma);
  return params_.xi + std::pow(params_.b * params_.gamma / u, k);
}

double CptSolution::integrate_gain(double tau, double density,
                                   const std::function<double(double, double)>& f,
                                   double* region_probability) const {
  const double scale = kappa_ * std::sqrt(tau);
  const double drift = -0.5 * kappa_ * kappa_ * tau;
  // l(z) = exp(-scale z + drift); gain iff lambda * density * l(z) < u_bar.
  if (scale == 0.0) {
    const double l = std::exp(drift);
    const double y = optimal_terminal_wealth(density * l);
    const bool gain = lambda_ * density * l < u_bar_;
    if (region_probability) *region_probability = gain ? 1.0 : 0.0;
    return gain ? f(l, y) : 0.0;
  }
  const double z_star = (std::log(lambda_ * density / u_bar_) + drift) / scale;
  // Beyond |z| = kZMax the Gaussian weight underflows.
  constexpr double kZMax = 40.0;
  double z_lo = -kZMax;
  double z_hi = kZMax;
  if (scale > 0.0) {
    z_lo = std::max(z_star, -kZMax);
    if (region_probability) *region_probability = normal_cdf(-z_star);
  } else {
    z_hi = std::min(z_star, kZMax);
    if (region_probability) *region_probability = normal_cdf(z_star);
  }
  if (!(z_hi > z_lo)) return 0.0;

  auto integrand = [&](double z) {
    const double l = std::exp(-scale * z + drift);
    return f(l, optimal_terminal_wealth(density * l)) * normal_pdf(z);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, z_lo, z_hi, config_.max_depth, config_.quadrature_tolerance);
}

double CptSolution::budget_for(double lambda) const {
  // Temporarily evaluate with a candidate multiplier.
  CptSolution probe = *this;
  probe.lambda_ = lambda;
  return probe.value(horizon_, 1.0);
}

double CptSolution::value(double tau, double density) const {
  detail::require(tau >= 0.0, "cpt value: tau must be nonnegative");
  return integrate_gain(tau, density, [](double l, double y) { return l * y; });
}

double CptSolution::invested_amount(double t, double density) const {
  detail::require(t >= 0.0 && t < horizon_,
                  "cpt invested_amount: t must lie in [0, T)");
  const double tau = horizon_ - t;
  const double h = config_.fd_log_step;
  const double up = value(tau, density * std::exp(h));
  const double down = value(tau, density * std::exp(-h));
  // d log L / d log S = -kappa / sigma.
  return -(kappa_ / sigma_) * (up - down) / (2.0 * h);
}

double CptSolution::density_at(double t, double price) const {
  const double w = (std::log(price / s0_) - (mu_ - 0.5 * sigma_ * sigma_) * t) / sigma_;
  return std::exp(-kappa_ * w - 0.5 * kappa_ * kappa_ * t);
}

double CptSolution::expected_utility() const {
  const UtilitySpec u = UtilitySpec::cpt(params_);
  double gain_mass = 0.0;
  const double gain_part = integrate_gain(
      horizon_, 1.0, [&u](double, double y) { return u(y); }, &gain_mass);
  return gain_part + (1.0 - gain_mass) * u(0.0);
}

std::vector<std::pair<double, double>> CptSolution::terminal_profile(
    std::size_t nodes) const {
  detail::require(nodes >= 1, "cpt profile: need at least one node");
  std::vector<std::pair<double, double>> out;
  out.reserve(nodes);
  const double scale = kappa_ * std::sqrt(horizon_);
  const double drift = -0.5 * kappa_ * kappa_ * horizon_;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(nodes);
    const double l = std::exp(-scale * normal_quantile(p) + drift);
    out.emplace_back(l, optimal_terminal_wealth(l));
  }
  return out;
}

}  // namespace relnash
