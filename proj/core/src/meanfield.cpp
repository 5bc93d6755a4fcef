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

#include "relnash/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "relnash/errors.hpp"
#include "relnash/game.hpp"
#include "relnash/simulation.hpp"

namespace relnash {

namespace {

constexpr std::uint64_t kPopulationSalt = 4;
constexpr std::uint64_t kConvergenceSalt = 5;
constexpr std::size_t kMaxRedraws = 1000;

void validate_marginal(const Marginal& m, const char* name) {
  const std::string tag = std::string("population ") + name;
  switch (m.kind) {
    case Marginal::Kind::kConstant:
      break;
    case Marginal::Kind::kUniform:
      detail::require(m.lo <= m.hi, tag + ": uniform needs lo <= hi");
      break;
    case Marginal::Kind::kAtoms: {
      detail::require(!m.values.empty() && m.values.size() == m.probs.size(),
                      tag + ": atoms need one probability per value");
      double total = 0.0;
      for (double p : m.probs) {
        detail::require(p >= 0.0, tag + ": negative probability");
        total += p;
      }
      detail::require(std::abs(total - 1.0) < 1e-12, tag + ": probabilities must sum to 1");
      break;
    }
  }
}

double marginal_lower(const Marginal& m) {
  switch (m.kind) {
    case Marginal::Kind::kConstant:
      return m.lo;
    case Marginal::Kind::kUniform:
      return m.lo;
    case Marginal::Kind::kAtoms:
      return *std::min_element(m.values.begin(), m.values.end());
  }
  return m.lo;
}

std::size_t pick(std::mt19937_64& rng, const std::vector<double>& probs) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (u < acc) return j;
  }
  return probs.size() - 1;
}

PopulationAtom draw(const PopulationSpec& pop, std::mt19937_64& rng) {
  if (!pop.sampled()) {
    std::vector<double> probs;
    for (const auto& a : pop.atoms) probs.push_back(a.prob);
    PopulationAtom out = pop.atoms[pick(rng, probs)];
    out.prob = 1.0;
    return out;
  }
  PopulationAtom out;
  out.capital = pop.capital->sample(rng);
  out.delta = pop.delta->sample(rng);
  out.theta = pop.theta->sample(rng);
  out.prob = 1.0;
  return out;
}

}  // namespace

Marginal Marginal::constant(double v) {
  Marginal m;
  m.kind = Kind::kConstant;
  m.lo = m.hi = v;
  return m;
}

Marginal Marginal::uniform(double lo, double hi) {
  Marginal m;
  m.kind = Kind::kUniform;
  m.lo = lo;
  m.hi = hi;
  return m;
}

Marginal Marginal::atoms(std::vector<double> values, std::vector<double> probs) {
  Marginal m;
  m.kind = Kind::kAtoms;
  m.values = std::move(values);
  m.probs = std::move(probs);
  return m;
}

double Marginal::mean() const {
  switch (kind) {
    case Kind::kConstant:
      return lo;
    case Kind::kUniform:
      return 0.5 * (lo + hi);
    case Kind::kAtoms:
      return std::inner_product(values.begin(), values.end(), probs.begin(), 0.0);
  }
  return lo;
}

double Marginal::upper() const {
  if (kind == Kind::kAtoms) return *std::max_element(values.begin(), values.end());
  return hi;
}

double Marginal::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::kConstant:
      return lo;
    case Kind::kUniform: {
      std::uniform_real_distribution<double> unif(lo, hi);
      return unif(rng);
    }
    case Kind::kAtoms:
      return values[pick(rng, probs)];
  }
  return lo;
}

double PopulationSpec::theta_bar() const {
  if (!sampled()) {
    double s = 0.0;
    for (const auto& a : atoms) s += a.prob * a.theta;
    return s;
  }
  return theta->mean();
}

double PopulationSpec::capital_bar() const {
  if (!sampled()) {
    double s = 0.0;
    for (const auto& a : atoms) s += a.prob * a.capital;
    return s;
  }
  return capital->mean();
}

std::vector<PopulationAtom> PopulationSpec::support() const {
  if (!sampled()) return atoms;
  std::mt19937_64 rng = make_stream(seed, 0, kPopulationSalt);
  std::vector<PopulationAtom> out(samples);
  for (auto& a : out) {
    a = draw(*this, rng);
    a.prob = 1.0 / static_cast<double>(samples);
  }
  return out;
}

void validate(const PopulationSpec& pop) {
  detail::require(pop.utility != UtilityKind::kCpt,
                  "population: prospect-theory populations are not supported");
  if (pop.sampled()) {
    detail::require(pop.capital && pop.delta && pop.theta,
                    "population: give atoms or all three marginals");
    detail::require(pop.samples >= 2, "population: need at least two samples");
    validate_marginal(*pop.capital, "capital");
    validate_marginal(*pop.delta, "delta");
    validate_marginal(*pop.theta, "theta");
    detail::require(marginal_lower(*pop.capital) > 0.0, "population: capital must be positive");
    detail::require(marginal_lower(*pop.delta) > 0.0, "population: delta must be positive");
    detail::require(marginal_lower(*pop.theta) >= 0.0 && pop.theta->upper() <= 1.0,
                    "population: theta must lie in [0,1]");
  } else {
    double total = 0.0;
    for (const auto& a : pop.atoms) {
      detail::require(a.capital > 0.0, "population: capital must be positive");
      detail::require(a.delta > 0.0, "population: delta must be positive");
      detail::require(a.theta >= 0.0 && a.theta <= 1.0, "population: theta must lie in [0,1]");
      detail::require(a.prob >= 0.0, "population: negative probability");
      total += a.prob;
    }
    detail::require(std::abs(total - 1.0) < 1e-12, "population: probabilities must sum to 1");
  }
  detail::require(pop.theta_bar() < 1.0, "population: E[theta] must be below 1");
}

UtilitySpec population_utility(const PopulationSpec& population, double delta) {
  return population.utility == UtilityKind::kPower ? UtilitySpec::power(delta)
                                                   : UtilitySpec::exponential(delta);
}

SingleAgentSolver default_single_agent_solver(const MarketModel& market, double horizon,
                                              UtilityKind utility,
                                              const SolveOptions& options) {
  detail::require(utility != UtilityKind::kCpt,
                  "population: prospect-theory populations are not supported");
  return [market, horizon, utility, options](double delta, double capital) {
    const UtilitySpec u = utility == UtilityKind::kPower ? UtilitySpec::power(delta)
                                                         : UtilitySpec::exponential(delta);
    return solve_single_agent(market, u, capital, horizon, options);
  };
}

Eigen::VectorXd mf_amounts(const Eigen::VectorXd& psi, double theta, double theta_bar,
                           const Eigen::VectorXd& mean_psi) {
  detail::require(theta_bar < 1.0, "mean field: E[theta] must be below 1");
  return psi + theta / (1.0 - theta_bar) * mean_psi;
}

MeanFieldEquilibrium mf_equilibrium(const PopulationSpec& population,
                                    const SingleAgentSolver& solver) {
  validate(population);
  MeanFieldEquilibrium out;
  out.sampled = population.sampled();
  out.theta_bar = population.theta_bar();
  out.capital_bar = population.capital_bar();
  out.support = population.support();
  out.constant_in_time = true;
  for (const auto& a : out.support) {
    const double reduced = a.capital - a.theta * out.capital_bar;
    if (population.utility == UtilityKind::kPower) {
      detail::require(reduced > 0.0,
                      "population: reduced capital xi - theta E[xi] must be positive");
    }
    out.single_agent.push_back(solver(a.delta, reduced));
    const auto& sol = out.single_agent.back();
    out.constant_in_time = out.constant_in_time && sol.constant_amounts();
    out.psi_amounts.push_back(sol.initial_amounts());
  }
  const Eigen::Index d = out.psi_amounts.front().size();
  out.mean_psi = Eigen::VectorXd::Zero(d);
  if (out.sampled && population.utility == UtilityKind::kExponential) {
    // Exponential optima are linear in delta and ignore capital, so the
    // population mean is the optimum at E[delta].
    out.mean_psi = solver(population.delta->mean(), 0.0).initial_amounts();
  } else {
    for (std::size_t a = 0; a < out.support.size(); ++a)
      out.mean_psi += out.support[a].prob * out.psi_amounts[a];
  }
  for (std::size_t a = 0; a < out.support.size(); ++a) {
    out.phi_amounts.push_back(
        mf_amounts(out.psi_amounts[a], out.support[a].theta, out.theta_bar, out.mean_psi));
  }
  return out;
}

MeanFieldEquilibrium mf_equilibrium(const PopulationSpec& population,
                                    const MarketModel& market, double horizon) {
  return mf_equilibrium(population,
                        default_single_agent_solver(market, horizon, population.utility));
}

FixedPointCheck mf_fixed_point_check(const MeanFieldEquilibrium& mfe,
                                     const PathSet& paths, std::size_t threads) {
  detail::require(!mfe.support.empty(), "fixed point check: empty mean-field equilibrium");
  const std::size_t count = paths.num_paths;
  const std::size_t d = paths.num_assets;
  const double slack = 1.0 - mfe.theta_bar;

  // Population-average psi* as a process: constant amounts, or the
  // probability-weighted sum of per-type share arrays.
  StrategyProcess mean_psi;
  std::vector<double> returns;
  if (mfe.constant_in_time) {
    returns = return_sums(paths, threads);
  } else {
    mean_psi = StrategyProcess(count, paths.steps(), d, Quantity::kShares);
    for (std::size_t a = 0; a < mfe.support.size(); ++a) {
      const StrategyProcess s = to_shares(realize(mfe.single_agent[a], paths), paths);
      auto out = mean_psi.values();
      const auto in = s.values();
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += mfe.support[a].prob * in[x];
    }
  }

  std::vector<double> sum(count, 0.0);
  std::vector<double> sum_sq(count, 0.0);
  for (std::size_t a = 0; a < mfe.support.size(); ++a) {
    const auto& atom = mfe.support[a];
    std::vector<double> g_psi;
    std::vector<double> g_phi;
    if (mfe.constant_in_time) {
      g_psi.assign(count, 0.0);
      g_phi.assign(count, 0.0);
      for (std::size_t p = 0; p < count; ++p) {
        for (std::size_t k = 0; k < d; ++k) {
          const auto kk = static_cast<Eigen::Index>(k);
          g_psi[p] += mfe.psi_amounts[a][kk] * returns[p * d + k];
          g_phi[p] += mfe.phi_amounts[a][kk] * returns[p * d + k];
        }
      }
    } else {
      const StrategyProcess psi = to_shares(realize(mfe.single_agent[a], paths), paths);
      StrategyProcess phi = psi;
      const double c = atom.theta / slack;
      auto pv = phi.values();
      const auto mv = mean_psi.values();
      for (std::size_t x = 0; x < pv.size(); ++x) pv[x] += c * mv[x];
      const auto gp = asset_gains(psi, paths, threads);
      const auto gf = asset_gains(phi, paths, threads);
      g_psi.assign(count, 0.0);
      g_phi.assign(count, 0.0);
      for (std::size_t p = 0; p < count; ++p) {
        for (std::size_t k = 0; k < d; ++k) {
          g_psi[p] += gp[p * d + k];
          g_phi[p] += gf[p * d + k];
        }
      }
    }
    const double reduced = atom.capital - atom.theta * mfe.capital_bar;
    for (std::size_t p = 0; p < count; ++p) {
      const double x_phi = atom.capital + g_phi[p];
      const double z_psi = reduced + g_psi[p];
      const double diff = x_phi - z_psi / slack;
      sum[p] += atom.prob * diff;
      sum_sq[p] += atom.prob * diff * diff;
    }
  }

  FixedPointCheck out;
  out.exact = !mfe.sampled;
  const double k = static_cast<double>(mfe.support.size());
  for (std::size_t p = 0; p < count; ++p) {
    const double r = std::abs(sum[p]);
    if (p == 0 || r > out.residual) {
      out.residual = r;
      out.worst_path = p;
      if (mfe.sampled) {
        const double var = std::max(0.0, (sum_sq[p] - sum[p] * sum[p]) * k / (k - 1.0));
        out.std_error = std::sqrt(var / k);
      }
    }
  }
  return out;
}

ConvergenceCurve n_agent_to_mf_convergence(const PopulationSpec& population,
                                           const MarketModel& market, double horizon,
                                           const std::vector<std::size_t>& n_list,
                                           std::size_t repetitions, std::uint64_t seed) {
  validate(population);
  detail::require(!n_list.empty() && repetitions > 0,
                  "convergence: need at least one n and one repetition");
  const SingleAgentSolver solver =
      default_single_agent_solver(market, horizon, population.utility);
  const MeanFieldEquilibrium mfe = mf_equilibrium(population, solver);
  const double capital_bar = mfe.capital_bar;

  ConvergenceCurve curve;
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const std::size_t n = n_list[idx];
    detail::require(n >= 1, "convergence: n must be positive");
    ConvergencePoint point;
    point.n = n;
    std::vector<double> errors(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
      std::mt19937_64 rng = make_stream(seed, idx * repetitions + r, kConvergenceSalt);
      GameSpec game;
      game.market = market;
      game.horizon = horizon;
      std::vector<PopulationAtom> types;
      for (std::size_t attempt = 0;; ++attempt) {
        detail::require(attempt < kMaxRedraws,
                        "convergence: no feasible game after repeated draws");
        types.clear();
        game.agents.clear();
        for (std::size_t i = 0; i < n; ++i) {
          types.push_back(draw(population, rng));
          game.agents.push_back({types.back().capital, types.back().theta,
                                 population_utility(population, types.back().delta)});
        }
        const auto feas = check_feasibility(game);
        if (std::all_of(feas.begin(), feas.end(),
                        [](const FeasibilityReport& f) { return f.feasible; }))
          break;
        ++point.resamples;
      }
      const EquilibriumResult eq = solve_equilibrium(game);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& z = types[i];
        const Eigen::VectorXd psi =
            solver(z.delta, z.capital - z.theta * capital_bar).initial_amounts();
        const Eigen::VectorXd target = mf_amounts(psi, z.theta, mfe.theta_bar, mfe.mean_psi);
        Eigen::VectorXd phi(target.size());
        for (Eigen::Index k = 0; k < phi.size(); ++k)
          phi[k] = eq.phi_star[i](0, 0, static_cast<std::size_t>(k));
        err += (phi - target).norm();
      }
      errors[r] = err / static_cast<double>(n);
    }
    point.error = sample_estimate(errors);
    curve.points.push_back(point);
  }

  curve.strictly_decreasing = true;
  for (std::size_t j = 1; j < curve.points.size(); ++j) {
    if (!(curve.points[j].error.mean < curve.points[j - 1].error.mean))
      curve.strictly_decreasing = false;
  }
  // Least-squares slope in log-log coordinates.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (const auto& pt : curve.points) {
    if (!(pt.error.mean > 0.0)) continue;
    const double x = std::log(static_cast<double>(pt.n));
    const double y = std::log(pt.error.mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  const double m = static_cast<double>(used);
  const double den = m * sxx - sx * sx;
  curve.slope = used >= 2 && den > 0.0 ? (m * sxy - sx * sy) / den
                                       : std::numeric_limits<double>::quiet_NaN();
  return curve;
}

}  // namespace relnash
