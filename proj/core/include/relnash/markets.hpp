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

#ifndef RELNASH_MARKETS_HPP_
#define RELNASH_MARKETS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace relnash {

// The riskless bond is identically 1 (zero interest) in every model.

// dS_k = S_k (mu_k dt + sum_l sigma_kl dW_l).
struct BlackScholesParams {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd s0;

  std::size_t dim() const { return static_cast<std::size_t>(mu.size()); }
};

// One point of a finite jump-size distribution.
struct JumpAtom {
  Eigen::VectorXd z;
  double prob = 0.0;
};

// Black-Scholes diffusion plus compound-Poisson jumps with finitely many
// jump sizes. Jumps with Euclidean norm below 1 are compensated in the
// drift; larger ones are not.
struct LevyJumpParams {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd s0;
  double intensity = 0.0;
  std::vector<JumpAtom> atoms;

  std::size_t dim() const { return static_cast<std::size_t>(mu.size()); }
  BlackScholesParams diffusion() const { return {mu, sigma, s0}; }
  // Per-asset drift correction -intensity * sum_m prob_m z_m 1{|z_m| < 1}.
  Eigen::VectorXd compensator() const;
};

// dS = S (lambda Z dt + sqrt(Z) dW^S),
// dZ = kappa (mean_level - Z) dt + vol_of_vol sqrt(Z) dW^Z, d<W^S,W^Z> = rho dt.
struct HestonParams {
  double lambda_mpr = 0.0;
  double kappa = 0.0;
  double mean_level = 0.0;
  double vol_of_vol = 0.0;
  double rho = 0.0;
  double z0 = 0.0;
  double s0 = 1.0;
};

// Cox-Ross-Rubinstein binomial model on t_k = k T / N.
struct CRRParams {
  double u = 2.0;
  double d = 0.5;
  double p = 0.5;
  double s0 = 1.0;
  std::size_t steps = 1;

  // q = (1 - d) / (u - d).
  double risk_neutral_probability() const { return (1.0 - d) / (u - d); }
};

using MarketModel =
    std::variant<BlackScholesParams, LevyJumpParams, HestonParams, CRRParams>;

std::size_t market_dimension(const MarketModel& market);
std::string market_name(const MarketModel& market);

void validate(const BlackScholesParams& params, bool require_regular_sigma = true);
void validate(const LevyJumpParams& params);
void validate(const HestonParams& params);
void validate(const CRRParams& params);
void validate(const MarketModel& market);

// Price paths on a common time grid, stored path-major.
struct PathSet {
  std::vector<double> times;
  std::size_t num_paths = 0;
  std::size_t num_assets = 0;
  std::vector<double> prices;
  // Heston variance per path and grid point (empty otherwise).
  std::vector<double> variance;
  // Path probabilities for exhaustive trees (empty for Monte Carlo).
  std::vector<double> weights;
  // Number of jumps per path (Levy only).
  std::vector<std::uint32_t> jump_counts;
  std::uint64_t seed = 0;

  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  bool exhaustive() const { return !weights.empty(); }
  double price(std::size_t path, std::size_t step, std::size_t asset) const {
    return prices[(path * times.size() + step) * num_assets + asset];
  }
  double& price(std::size_t path, std::size_t step, std::size_t asset) {
    return prices[(path * times.size() + step) * num_assets + asset];
  }
};

struct PathOptions {
  std::size_t threads = 1;
  // Pair path 2j+1 with path 2j by negating the Gaussian draws.
  bool antithetic = false;
  // Skip the regular-volatility check (degenerate deterministic tests).
  bool allow_singular_volatility = false;
};

PathSet simulate_bs(const BlackScholesParams& params, double horizon,
                    std::size_t steps, std::size_t paths, std::uint64_t seed,
                    const PathOptions& options = {});

PathSet simulate_levy(const LevyJumpParams& params, double horizon,
                      std::size_t steps, std::size_t paths, std::uint64_t seed,
                      const PathOptions& options = {});

// Full-truncation Euler for the variance, log-Euler for the price.
PathSet simulate_heston(const HestonParams& params, double horizon,
                        std::size_t steps, std::size_t paths,
                        std::uint64_t seed, const PathOptions& options = {});

// 2^N paths, each with probability p^#up (1-p)^#down. Path 0 is all ups;
// the first step is the most significant bit of the path index (1 = down).
inline constexpr std::size_t kMaxExhaustiveSteps = 20;
PathSet build_crr_tree(const CRRParams& params, double horizon);

// Monte Carlo sampling of the binomial model for large N.
PathSet simulate_crr(const CRRParams& params, double horizon, std::size_t paths,
                     std::uint64_t seed, const PathOptions& options = {});

// Recombining-tree node price S(0) u^ups d^(step - ups).
double crr_node_price(const CRRParams& params, std::size_t step, std::size_t ups);

// Dispatches on the model. CRR uses its own step count; exhaustive
// enumeration is used when it fits under kMaxExhaustiveSteps.
PathSet generate_paths(const MarketModel& market, double horizon,
                       std::size_t steps, std::size_t paths, std::uint64_t seed,
                       const PathOptions& options = {});

// One row per (path, grid point): path,step,time,S1..Sd[,Z][,weight].
void write_pathset_csv(std::ostream& os, const PathSet& paths);

}  // namespace relnash

#endif  // RELNASH_MARKETS_HPP_
