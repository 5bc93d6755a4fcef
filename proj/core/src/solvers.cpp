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

#include "relnash/solvers.hpp"

#include <cmath>
#include <vector>

#include "relnash/errors.hpp"

namespace relnash {

namespace {

Eigen::VectorXd solve_covariance(const Eigen::MatrixXd& sigma,
                                 const Eigen::VectorXd& rhs, const char* who) {
  const Eigen::MatrixXd cov = sigma * sigma.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
  detail::require(lu.isInvertible(),
                  std::string(who) + ": sigma sigma^T is singular");
  return lu.solve(rhs);
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

// Shares of a fraction-of-wealth policy, running the self-financing wealth
// recursion on each path.
template <typename FractionAt>
StrategyProcess realize_fractions(const PathSet& paths, double capital,
                                  std::size_t assets, FractionAt fraction_at) {
  const std::size_t steps = paths.steps();
  StrategyProcess shares(paths.num_paths, steps, assets, Quantity::kShares);
  for (std::size_t p = 0; p < paths.num_paths; ++p) {
    double wealth = capital;
    for (std::size_t m = 0; m < steps; ++m) {
      double gain = 0.0;
      for (std::size_t k = 0; k < assets; ++k) {
        const double s = paths.price(p, m, k);
        const double h = fraction_at(paths.times[m], k) * wealth / s;
        shares(p, m, k) = h;
        gain += h * (paths.price(p, m + 1, k) - s);
      }
      wealth += gain;
    }
  }
  return shares;
}

}  // namespace

std::size_t SingleAgentSolution::assets() const {
  return static_cast<std::size_t>(initial_amounts().size());
}

bool SingleAgentSolution::constant_amounts() const {
  return std::holds_alternative<ConstantAmountPolicy>(policy);
}

Eigen::VectorXd SingleAgentSolution::initial_amounts() const {
  if (const auto* a = std::get_if<ConstantAmountPolicy>(&policy)) return a->amounts;
  if (const auto* f = std::get_if<ConstantFractionPolicy>(&policy))
    return f->fractions * capital;
  if (const auto* g = std::get_if<FractionFunctionPolicy>(&policy)) {
    Eigen::VectorXd out(1);
    out[0] = g->fraction(0.0) * capital;
    return out;
  }
  const auto& c = std::get<CptPolicy>(policy);
  Eigen::VectorXd out(1);
  out[0] = c.solution->initial_amount();
  return out;
}

StrategyProcess realize(const SingleAgentSolution& solution, const PathSet& paths) {
  detail::require(paths.num_paths > 0 && paths.steps() > 0,
                  "realize: empty path set");
  if (const auto* a = std::get_if<ConstantAmountPolicy>(&solution.policy)) {
    detail::require(static_cast<std::size_t>(a->amounts.size()) == paths.num_assets,
                    "realize: strategy and market dimensions differ");
    return StrategyProcess::constant(to_std(a->amounts), Quantity::kAmounts);
  }
  if (const auto* f = std::get_if<ConstantFractionPolicy>(&solution.policy)) {
    detail::require(static_cast<std::size_t>(f->fractions.size()) == paths.num_assets,
                    "realize: strategy and market dimensions differ");
    return realize_fractions(paths, solution.capital, paths.num_assets,
                             [f](double, std::size_t k) {
                               return f->fractions[static_cast<Eigen::Index>(k)];
                             });
  }
  if (const auto* g = std::get_if<FractionFunctionPolicy>(&solution.policy)) {
    detail::require(paths.num_assets == 1, "realize: fraction process needs d = 1");
    return realize_fractions(paths, solution.capital, 1,
                             [g](double t, std::size_t) { return g->fraction(t); });
  }
  const auto& cpt = *std::get<CptPolicy>(solution.policy).solution;
  detail::require(paths.num_assets == 1, "realize: prospect-theory policy needs d = 1");
  const std::size_t steps = paths.steps();
  StrategyProcess amounts(paths.num_paths, steps, 1, Quantity::kAmounts);
  for (std::size_t p = 0; p < paths.num_paths; ++p) {
    for (std::size_t m = 0; m < steps; ++m) {
      const double t = paths.times[m];
      amounts(p, m, 0) = cpt.invested_amount(t, cpt.density_at(t, paths.price(p, m, 0)));
    }
  }
  return amounts;
}

StrategyProcess to_shares(const StrategyProcess& strategy, const PathSet& paths) {
  detail::require(strategy.assets() == paths.num_assets,
                  "to_shares: strategy and market dimensions differ");
  const std::size_t steps = paths.steps();
  detail::require((strategy.paths() == 1 || strategy.paths() == paths.num_paths) &&
                      (strategy.steps() == 1 || strategy.steps() == steps),
                  "to_shares: strategy grid does not match the path set");
  StrategyProcess out(paths.num_paths, steps, paths.num_assets, Quantity::kShares);
  const bool amounts = strategy.quantity() == Quantity::kAmounts;
  for (std::size_t p = 0; p < paths.num_paths; ++p) {
    for (std::size_t m = 0; m < steps; ++m) {
      for (std::size_t k = 0; k < paths.num_assets; ++k) {
        const double v = strategy.at(p, m, k);
        out(p, m, k) = amounts ? v / paths.price(p, m, k) : v;
      }
    }
  }
  return out;
}

SingleAgentSolution solve_exp_bs(const BlackScholesParams& params, double delta) {
  validate(params);
  detail::require(delta > 0.0, "solve_exp_bs: delta must be positive");
  SingleAgentSolution out;
  out.policy = ConstantAmountPolicy{delta * solve_covariance(params.sigma, params.mu,
                                                             "solve_exp_bs")};
  out.unique = true;
  out.diagnostics.method = "closed form delta (sigma sigma^T)^-1 mu";
  return out;
}

Eigen::VectorXd levy_first_order_residual(const LevyJumpParams& params,
                                          double delta, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd cov = params.sigma * params.sigma.transpose();
  Eigen::VectorXd r = params.mu - cov * pi / delta;
  for (const auto& atom : params.atoms) {
    const double small = atom.z.norm() < 1.0 ? 1.0 : 0.0;
    const double e = std::exp(-pi.dot(atom.z) / delta);
    r += params.intensity * atom.prob * (e - small) * atom.z;
  }
  return r;
}

namespace {

// Jacobian of levy_first_order_residual; negative definite by construction.
Eigen::MatrixXd levy_jacobian(const LevyJumpParams& params, double delta,
                              const Eigen::VectorXd& pi) {
  Eigen::MatrixXd j = -(params.sigma * params.sigma.transpose()) / delta;
  for (const auto& atom : params.atoms) {
    const double e = std::exp(-pi.dot(atom.z) / delta);
    j -= params.intensity * atom.prob * e / delta * atom.z * atom.z.transpose();
  }
  return j;
}

struct NewtonOutcome {
  Eigen::VectorXd point;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool negative_definite = true;
};

NewtonOutcome damped_newton(const LevyJumpParams& params, double delta,
                            Eigen::VectorXd pi, const NewtonConfig& cfg) {
  NewtonOutcome out;
  Eigen::VectorXd f = levy_first_order_residual(params, delta, pi);
  double norm = f.lpNorm<Eigen::Infinity>();
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    if (norm < cfg.tolerance) {
      out.converged = true;
      out.iterations = it;
      break;
    }
    const Eigen::MatrixXd jac = levy_jacobian(params, delta, pi);
    Eigen::LLT<Eigen::MatrixXd> llt(-jac);
    if (llt.info() != Eigen::Success) out.negative_definite = false;
    const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
    double t = 1.0;
    Eigen::VectorXd trial = pi + step;
    Eigen::VectorXd f_trial = levy_first_order_residual(params, delta, trial);
    for (std::size_t h = 0; h < cfg.max_halvings &&
                            !(f_trial.lpNorm<Eigen::Infinity>() < norm);
         ++h) {
      t *= 0.5;
      trial = pi + t * step;
      f_trial = levy_first_order_residual(params, delta, trial);
    }
    pi = trial;
    f = f_trial;
    norm = f.lpNorm<Eigen::Infinity>();
    out.iterations = it + 1;
  }
  if (norm < cfg.tolerance) out.converged = true;
  out.point = pi;
  out.residual = norm;
  return out;
}

}  // namespace

SingleAgentSolution solve_exp_levy(const LevyJumpParams& params, double delta,
                                   const NewtonConfig& config) {
  validate(params);
  detail::require(delta > 0.0, "solve_exp_levy: delta must be positive");
  const Eigen::VectorXd start =
      delta * solve_covariance(params.sigma, params.mu, "solve_exp_levy");

  const NewtonOutcome main = damped_newton(params, delta, start, config);
  if (!main.converged) {
    throw SolverError("solve_exp_levy: Newton iteration did not converge in " +
                          std::to_string(config.max_iterations) + " iterations",
                      main.residual);
  }
  // Second start from the origin; disagreement clears the uniqueness flag.
  const NewtonOutcome alt =
      damped_newton(params, delta, Eigen::VectorXd::Zero(start.size()), config);
  const bool agree = alt.converged &&
                     (alt.point - main.point).lpNorm<Eigen::Infinity>() <=
                         1e-8 * (1.0 + main.point.lpNorm<Eigen::Infinity>());

  SingleAgentSolution out;
  out.policy = ConstantAmountPolicy{main.point};
  out.unique = main.negative_definite && agree;
  out.diagnostics = {"damped Newton on the first-order condition", main.iterations,
                     main.residual};
  return out;
}

double crr_exp_amount_factor(const CRRParams& params) {
  validate(params);
  const double q = params.risk_neutral_probability();
  const double p = params.p;
  return (std::log((1.0 - q) / (1.0 - p)) - std::log(q / p)) / (params.u - params.d);
}

SingleAgentSolution solve_exp_crr(const CRRParams& params, double delta) {
  detail::require(delta > 0.0, "solve_exp_crr: delta must be positive");
  SingleAgentSolution out;
  Eigen::VectorXd amount(1);
  amount[0] = delta * crr_exp_amount_factor(params);
  out.policy = ConstantAmountPolicy{amount};
  out.unique = true;
  out.diagnostics.method = "closed form binomial exponential";
  return out;
}

SingleAgentSolution solve_crra_bs(const BlackScholesParams& params, double delta,
                                  double capital) {
  validate(params);
  detail::require(delta > 0.0, "solve_crra_bs: delta must be positive");
  detail::require(capital > 0.0,
                  "solve_crra_bs: reduced capital must be positive for power utility");
  SingleAgentSolution out;
  out.policy = ConstantFractionPolicy{
      delta * solve_covariance(params.sigma, params.mu, "solve_crra_bs")};
  out.capital = capital;
  out.unique = true;
  out.diagnostics.method = "Merton fraction delta (sigma sigma^T)^-1 mu";
  return out;
}

SingleAgentSolution solve_crra_bs_gamma(const BlackScholesParams& params,
                                        double gamma, double capital) {
  detail::require(gamma < 1.0, "solve_crra_bs: gamma must be below 1");
  return solve_crra_bs(params, 1.0 / (1.0 - gamma), capital);
}

SingleAgentSolution solve_crra_heston(const HestonParams& params, double delta,
                                      double capital,
                                      const std::optional<HestonAdjustment>& f) {
  validate(params);
  detail::require(delta > 0.0, "solve_crra_heston: delta must be positive");
  detail::require(capital > 0.0,
                  "solve_crra_heston: reduced capital must be positive for power utility");
  const double myopic = delta * params.lambda_mpr;
  const bool degenerate = params.kappa == 0.0 && params.vol_of_vol == 0.0;

  SingleAgentSolution out;
  out.capital = capital;
  if (f && f->f) {
    auto adj = f->f;
    out.policy = FractionFunctionPolicy{[myopic, adj](double t) { return myopic + adj(t); }};
    out.unique = f->exact;
    out.diagnostics.method = "myopic fraction plus supplied correction";
  } else {
    out.policy = FractionFunctionPolicy{[myopic](double) { return myopic; }};
    // With constant variance the myopic fraction is the exact optimum.
    out.unique = degenerate;
    out.diagnostics.method = "myopic fraction delta * lambda";
  }
  return out;
}

BlackScholesParams heston_as_black_scholes(const HestonParams& params) {
  validate(params);
  detail::require(params.kappa == 0.0 && params.vol_of_vol == 0.0,
                  "heston_as_black_scholes: need kappa = vol_of_vol = 0");
  BlackScholesParams bs;
  bs.mu = Eigen::VectorXd::Constant(1, params.lambda_mpr * params.z0);
  bs.sigma = Eigen::MatrixXd::Constant(1, 1, std::sqrt(params.z0));
  bs.s0 = Eigen::VectorXd::Constant(1, params.s0);
  return bs;
}

SingleAgentSolution solve_cpt_bs(const BlackScholesParams& params, double horizon,
                                 const CptParams& cpt, double reduced_capital,
                                 const CptConfig& config) {
  validate(params);
  detail::require(params.dim() == 1, "solve_cpt_bs: needs a one-dimensional market");
  const double budget = reduced_capital + cpt.xi;
  detail::require(budget > 0.0, "solve_cpt_bs: budget x0_reduced + xi must be positive");
  auto solution = std::make_shared<const CptSolution>(
      params.mu[0], params.sigma(0, 0), params.s0[0], horizon, cpt, budget, config);

  SingleAgentSolution out;
  out.capital = budget;
  out.unique = true;
  out.diagnostics = {"martingale method, multiplier bisection", solution->iterations(),
                     solution->budget_residual()};
  out.policy = CptPolicy{std::move(solution)};
  return out;
}

}  // namespace relnash
