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

#ifndef RELNASH_MEANFIELD_HPP_
#define RELNASH_MEANFIELD_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "relnash/equilibrium.hpp"
#include "relnash/markets.hpp"
#include "relnash/numerics.hpp"
#include "relnash/solvers.hpp"
#include "relnash/utility.hpp"

namespace relnash {

// One type zeta = (capital, delta, theta) with its probability.
struct PopulationAtom {
  double capital = 1.0;
  double delta = 1.0;
  double theta = 0.0;
  double prob = 1.0;
};

// Distribution of one coordinate of zeta for sampled populations.
struct Marginal {
  enum class Kind { kConstant, kUniform, kAtoms };
  Kind kind = Kind::kConstant;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;
  std::vector<double> probs;

  static Marginal constant(double v);
  static Marginal uniform(double lo, double hi);
  static Marginal atoms(std::vector<double> values, std::vector<double> probs);

  double mean() const;
  double upper() const;
  double sample(std::mt19937_64& rng) const;
};

// Either explicit atoms or independent marginals sampled with a fixed seed.
// Types are drawn from their own RNG stream, independent of market paths.
struct PopulationSpec {
  UtilityKind utility = UtilityKind::kExponential;
  std::vector<PopulationAtom> atoms;
  std::optional<Marginal> capital;
  std::optional<Marginal> delta;
  std::optional<Marginal> theta;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;

  bool sampled() const { return atoms.empty(); }
  // E[theta], E[capital] exactly (atoms or marginal means).
  double theta_bar() const;
  double capital_bar() const;
  // Atoms, or `samples` equally likely draws from the marginals.
  std::vector<PopulationAtom> support() const;
};

// Throws InvalidInput on empty or malformed populations, theta outside
// [0,1], non-positive delta or capital, or E[theta] >= 1.
void validate(const PopulationSpec& population);

UtilitySpec population_utility(const PopulationSpec& population, double delta);

// Single-agent solver for a type: (delta, reduced capital) -> solution.
using SingleAgentSolver = std::function<SingleAgentSolution(double, double)>;

SingleAgentSolver default_single_agent_solver(const MarketModel& market, double horizon,
                                              UtilityKind utility,
                                              const SolveOptions& options = {});

struct MeanFieldEquilibrium {
  std::vector<PopulationAtom> support;
  std::vector<SingleAgentSolution> single_agent;
  double theta_bar = 0.0;
  double capital_bar = 0.0;
  // Time-0 amounts per support point and their population average.
  std::vector<Eigen::VectorXd> psi_amounts;
  std::vector<Eigen::VectorXd> phi_amounts;
  Eigen::VectorXd mean_psi;
  bool constant_in_time = false;
  bool sampled = false;
};

// phi* = psi* + theta / (1 - theta_bar) E[psi*], with psi* the optimum of the
// auxiliary problem with capital xi - theta E[xi].
MeanFieldEquilibrium mf_equilibrium(const PopulationSpec& population,
                                    const SingleAgentSolver& solver);
MeanFieldEquilibrium mf_equilibrium(const PopulationSpec& population,
                                    const MarketModel& market, double horizon);

// Mean-field amounts for one type given E[psi*].
Eigen::VectorXd mf_amounts(const Eigen::VectorXd& psi, double theta, double theta_bar,
                           const Eigen::VectorXd& mean_psi);

struct FixedPointCheck {
  // max over paths of |population mean of X^{phi*} - E[Z^{psi*}] / (1 - theta_bar)|.
  double residual = 0.0;
  // Sampling standard error at the worst path (zero for atoms).
  double std_error = 0.0;
  std::size_t worst_path = 0;
  bool exact = false;
};

FixedPointCheck mf_fixed_point_check(const MeanFieldEquilibrium& mfe,
                                     const PathSet& paths, std::size_t threads = 1);

struct ConvergencePoint {
  std::size_t n = 0;
  // Mean over repetitions of the agent-averaged |phi_i - phi_MF(zeta_i)|.
  Estimate error;
  std::size_t resamples = 0;
};

struct ConvergenceCurve {
  std::vector<ConvergencePoint> points;
  // Least-squares slope of log(error) against log(n); NaN when undefined.
  double slope = 0.0;
  bool strictly_decreasing = false;
};

// Builds games of n agents drawn i.i.d. from the population and compares
// their equilibrium time-0 amounts with the mean-field formula at each
// agent's type. Draws with non-positive reduced capital under power
// utility are redrawn (counted in `resamples`).
ConvergenceCurve n_agent_to_mf_convergence(const PopulationSpec& population,
                                           const MarketModel& market, double horizon,
                                           const std::vector<std::size_t>& n_list,
                                           std::size_t repetitions, std::uint64_t seed);

}  // namespace relnash

#endif  // RELNASH_MEANFIELD_HPP_
