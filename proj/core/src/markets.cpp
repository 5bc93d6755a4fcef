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

#include "relnash/markets.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "relnash/errors.hpp"
#include "relnash/numerics.hpp"

namespace relnash {

namespace {

// Stream salts so that the diffusion draws of every model coincide path by
// path for a given seed.
constexpr std::uint64_t kDiffusionSalt = 0;
constexpr std::uint64_t kJumpSalt = 1;
constexpr std::uint64_t kVarianceSalt = 2;
constexpr std::uint64_t kBinomialSalt = 3;

struct Overload {
  template <typename... F>
  struct Set : F... {
    using F::operator()...;
  };
};
template <typename... F>
Overload::Set<F...> overload(F... f) {
  return {f...};
}

void validate_diffusion(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                        const Eigen::VectorXd& s0, bool require_regular,
                        const char* who) {
  const std::string tag(who);
  detail::require(mu.size() >= 1, tag + ": need at least one asset");
  detail::require(sigma.rows() == mu.size() && sigma.cols() == mu.size(),
                  tag + ": sigma must be d x d");
  detail::require(s0.size() == mu.size(), tag + ": s0 must have d entries");
  for (Eigen::Index k = 0; k < s0.size(); ++k)
    detail::require(s0[k] > 0.0, tag + ": initial prices must be positive");
  detail::require(mu.allFinite() && sigma.allFinite(),
                  tag + ": parameters must be finite");
  if (require_regular) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma);
    detail::require(lu.isInvertible(), tag + ": sigma must be invertible");
  }
}

PathSet make_pathset(double horizon, std::size_t steps, std::size_t paths,
                     std::size_t assets, std::uint64_t seed) {
  detail::require(horizon > 0.0, "paths: horizon must be positive");
  detail::require(steps >= 1, "paths: need at least one time step");
  detail::require(paths >= 1, "paths: need at least one path");
  PathSet out;
  out.times.resize(steps + 1);
  for (std::size_t m = 0; m <= steps; ++m)
    out.times[m] = horizon * static_cast<double>(m) / static_cast<double>(steps);
  out.num_paths = paths;
  out.num_assets = assets;
  out.prices.resize(paths * (steps + 1) * assets);
  out.seed = seed;
  return out;
}

// Log-Euler step coefficients shared by the Black-Scholes and Levy paths.
struct LogDiffusion {
  Eigen::VectorXd log_drift;  // (mu_k - comp_k - 0.5 sum_l sigma_kl^2) dt
  Eigen::MatrixXd vol;        // sigma sqrt(dt)
};

LogDiffusion log_diffusion(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                           const Eigen::VectorXd& compensator, double dt) {
  LogDiffusion out;
  const Eigen::Index d = mu.size();
  out.log_drift.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    out.log_drift[k] =
        (mu[k] - compensator[k] - 0.5 * sigma.row(k).squaredNorm()) * dt;
  }
  out.vol = sigma * std::sqrt(dt);
  return out;
}

void fill_diffusion_path(PathSet& out, std::size_t path, const Eigen::VectorXd& s0,
                         const LogDiffusion& coeffs, bool antithetic) {
  const std::size_t d = out.num_assets;
  const std::size_t stream = antithetic ? path / 2 : path;
  const double sign = (antithetic && path % 2 == 1) ? -1.0 : 1.0;
  auto rng = make_stream(out.seed, stream, kDiffusionSalt);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(static_cast<Eigen::Index>(d));
  Eigen::VectorXd log_s = s0.array().log();
  for (std::size_t k = 0; k < d; ++k) out.price(path, 0, k) = s0[static_cast<Eigen::Index>(k)];
  for (std::size_t m = 1; m < out.times.size(); ++m) {
    for (std::size_t l = 0; l < d; ++l) z[static_cast<Eigen::Index>(l)] = sign * normal(rng);
    log_s += coeffs.log_drift + coeffs.vol * z;
    for (std::size_t k = 0; k < d; ++k)
      out.price(path, m, k) = std::exp(log_s[static_cast<Eigen::Index>(k)]);
  }
}

}  // namespace

Eigen::VectorXd LevyJumpParams::compensator() const {
  Eigen::VectorXd comp = Eigen::VectorXd::Zero(mu.size());
  for (const auto& atom : atoms) {
    if (atom.z.norm() < 1.0) comp += intensity * atom.prob * atom.z;
  }
  return comp;
}

std::size_t market_dimension(const MarketModel& market) {
  return std::visit(
      overload([](const BlackScholesParams& p) { return p.dim(); },
               [](const LevyJumpParams& p) { return p.dim(); },
               [](const HestonParams&) { return std::size_t{1}; },
               [](const CRRParams&) { return std::size_t{1}; }),
      market);
}

std::string market_name(const MarketModel& market) {
  return std::visit(
      overload([](const BlackScholesParams&) { return std::string("black_scholes"); },
               [](const LevyJumpParams&) { return std::string("levy"); },
               [](const HestonParams&) { return std::string("heston"); },
               [](const CRRParams&) { return std::string("crr"); }),
      market);
}

void validate(const BlackScholesParams& params, bool require_regular_sigma) {
  validate_diffusion(params.mu, params.sigma, params.s0, require_regular_sigma,
                     "black_scholes");
}

void validate(const LevyJumpParams& params) {
  validate_diffusion(params.mu, params.sigma, params.s0, true, "levy");
  detail::require(params.intensity >= 0.0 && std::isfinite(params.intensity),
                  "levy: jump intensity must be nonnegative");
  if (params.intensity == 0.0 && params.atoms.empty()) return;
  detail::require(!params.atoms.empty(), "levy: jump distribution has no atoms");
  double total = 0.0;
  for (const auto& atom : params.atoms) {
    detail::require(atom.z.size() == params.mu.size(),
                    "levy: jump atom dimension must equal d");
    for (Eigen::Index k = 0; k < atom.z.size(); ++k)
      detail::require(atom.z[k] > -1.0,
                      "levy: every jump coordinate must exceed -1");
    detail::require(atom.prob >= 0.0, "levy: atom probabilities must be >= 0");
    total += atom.prob;
  }
  detail::require(std::abs(total - 1.0) < 1e-12,
                  "levy: atom probabilities must sum to 1");
}

void validate(const HestonParams& p) {
  detail::require(p.kappa >= 0.0, "heston: kappa must be nonnegative");
  detail::require(p.mean_level >= 0.0, "heston: mean_level must be nonnegative");
  detail::require(p.vol_of_vol >= 0.0, "heston: vol_of_vol must be nonnegative");
  detail::require(p.rho >= -1.0 && p.rho <= 1.0, "heston: rho must lie in [-1,1]");
  detail::require(p.z0 > 0.0, "heston: z0 must be positive");
  detail::require(p.s0 > 0.0, "heston: s0 must be positive");
  detail::require(std::isfinite(p.lambda_mpr), "heston: lambda must be finite");
  detail::require(2.0 * p.kappa * p.mean_level >= p.vol_of_vol * p.vol_of_vol,
                  "heston: Feller condition 2 kappa mean_level >= vol_of_vol^2 violated");
}

void validate(const CRRParams& p) {
  detail::require(p.d > 0.0 && p.d < 1.0 && p.u > 1.0,
                  "crr: need 0 < d < 1 < u (no arbitrage)");
  detail::require(p.p > 0.0 && p.p < 1.0, "crr: p must lie in (0,1)");
  detail::require(p.s0 > 0.0, "crr: s0 must be positive");
  detail::require(p.steps >= 1, "crr: need at least one step");
}

void validate(const MarketModel& market) {
  std::visit([](const auto& p) { validate(p); }, market);
}

PathSet simulate_bs(const BlackScholesParams& params, double horizon,
                    std::size_t steps, std::size_t paths, std::uint64_t seed,
                    const PathOptions& options) {
  validate(params, !options.allow_singular_volatility);
  PathSet out = make_pathset(horizon, steps, paths, params.dim(), seed);
  const auto coeffs =
      log_diffusion(params.mu, params.sigma,
                    Eigen::VectorXd::Zero(params.mu.size()), horizon / steps);
  parallel_for(paths, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      fill_diffusion_path(out, p, params.s0, coeffs, options.antithetic);
  });
  return out;
}

PathSet simulate_levy(const LevyJumpParams& params, double horizon,
                      std::size_t steps, std::size_t paths, std::uint64_t seed,
                      const PathOptions& options) {
  validate(params);
  PathSet out = make_pathset(horizon, steps, paths, params.dim(), seed);
  out.jump_counts.assign(paths, 0);
  const double dt = horizon / steps;
  const auto coeffs = log_diffusion(params.mu, params.sigma, params.compensator(), dt);
  std::vector<double> probs;
  for (const auto& atom : params.atoms) probs.push_back(atom.prob);
  const std::size_t d = params.dim();

  parallel_for(paths, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      fill_diffusion_path(out, p, params.s0, coeffs, options.antithetic);
      if (params.intensity == 0.0) continue;
      auto rng = make_stream(seed, options.antithetic ? p / 2 : p, kJumpSalt);
      std::poisson_distribution<int> count(params.intensity * dt);
      std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
      Eigen::VectorXd factor = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d));
      std::uint32_t jumps = 0;
      for (std::size_t m = 1; m < out.times.size(); ++m) {
        const int n = count(rng);
        for (int j = 0; j < n; ++j) {
          const auto& atom = params.atoms[pick(rng)];
          factor.array() *= 1.0 + atom.z.array();
        }
        jumps += static_cast<std::uint32_t>(n);
        for (std::size_t k = 0; k < d; ++k)
          out.price(p, m, k) *= factor[static_cast<Eigen::Index>(k)];
      }
      out.jump_counts[p] = jumps;
    }
  });
  return out;
}

PathSet simulate_heston(const HestonParams& params, double horizon,
                        std::size_t steps, std::size_t paths,
                        std::uint64_t seed, const PathOptions& options) {
  validate(params);
  PathSet out = make_pathset(horizon, steps, paths, 1, seed);
  out.variance.resize(paths * (steps + 1));
  const double dt = horizon / steps;
  const double sqrt_dt = std::sqrt(dt);
  const double rho_perp = std::sqrt(1.0 - params.rho * params.rho);

  parallel_for(paths, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t stream = options.antithetic ? p / 2 : p;
      const double sign = (options.antithetic && p % 2 == 1) ? -1.0 : 1.0;
      auto price_rng = make_stream(seed, stream, kDiffusionSalt);
      auto var_rng = make_stream(seed, stream, kVarianceSalt);
      std::normal_distribution<double> normal_s;
      std::normal_distribution<double> normal_v;
      double log_s = std::log(params.s0);
      double z = params.z0;
      const std::size_t row = p * (steps + 1);
      out.price(p, 0, 0) = params.s0;
      out.variance[row] = z;
      for (std::size_t m = 1; m <= steps; ++m) {
        const double dw_s = sign * normal_s(price_rng) * sqrt_dt;
        const double dw_perp = sign * normal_v(var_rng) * sqrt_dt;
        const double dw_z = params.rho * dw_s + rho_perp * dw_perp;
        const double zp = std::max(z, 0.0);
        const double sqrt_zp = std::sqrt(zp);
        log_s += (params.lambda_mpr * zp - 0.5 * zp) * dt + sqrt_zp * dw_s;
        z += params.kappa * (params.mean_level - zp) * dt +
             params.vol_of_vol * sqrt_zp * dw_z;
        out.price(p, m, 0) = std::exp(log_s);
        out.variance[row + m] = z;
      }
    }
  });
  return out;
}

PathSet build_crr_tree(const CRRParams& params, double horizon) {
  validate(params);
  if (params.steps > kMaxExhaustiveSteps) {
    throw CapacityError("crr: " + std::to_string(params.steps) +
                        " steps exceed the exhaustive limit of " +
                        std::to_string(kMaxExhaustiveSteps) +
                        "; use Monte Carlo sampling (simulate_crr)");
  }
  const std::size_t n = params.steps;
  const std::size_t count = std::size_t{1} << n;
  PathSet out = make_pathset(horizon, n, count, 1, 0);
  out.weights.resize(count);
  for (std::size_t path = 0; path < count; ++path) {
    double s = params.s0;
    double w = 1.0;
    out.price(path, 0, 0) = s;
    for (std::size_t step = 0; step < n; ++step) {
      const bool down = (path >> (n - 1 - step)) & 1U;
      s *= down ? params.d : params.u;
      w *= down ? 1.0 - params.p : params.p;
      out.price(path, step + 1, 0) = s;
    }
    out.weights[path] = w;
  }
  return out;
}

PathSet simulate_crr(const CRRParams& params, double horizon, std::size_t paths,
                     std::uint64_t seed, const PathOptions& options) {
  validate(params);
  PathSet out = make_pathset(horizon, params.steps, paths, 1, seed);
  parallel_for(paths, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      auto rng = make_stream(seed, p, kBinomialSalt);
      std::bernoulli_distribution up(params.p);
      double s = params.s0;
      out.price(p, 0, 0) = s;
      for (std::size_t m = 1; m <= params.steps; ++m) {
        s *= up(rng) ? params.u : params.d;
        out.price(p, m, 0) = s;
      }
    }
  });
  return out;
}

double crr_node_price(const CRRParams& params, std::size_t step, std::size_t ups) {
  detail::require(ups <= step, "crr: ups cannot exceed the step index");
  return params.s0 * std::pow(params.u, static_cast<double>(ups)) *
         std::pow(params.d, static_cast<double>(step - ups));
}

PathSet generate_paths(const MarketModel& market, double horizon,
                       std::size_t steps, std::size_t paths, std::uint64_t seed,
                       const PathOptions& options) {
  return std::visit(
      overload(
          [&](const BlackScholesParams& p) {
            return simulate_bs(p, horizon, steps, paths, seed, options);
          },
          [&](const LevyJumpParams& p) {
            return simulate_levy(p, horizon, steps, paths, seed, options);
          },
          [&](const HestonParams& p) {
            return simulate_heston(p, horizon, steps, paths, seed, options);
          },
          [&](const CRRParams& p) {
            if (p.steps <= kMaxExhaustiveSteps) return build_crr_tree(p, horizon);
            return simulate_crr(p, horizon, paths, seed, options);
          }),
      market);
}

void write_pathset_csv(std::ostream& os, const PathSet& paths) {
  os << "path,step,time";
  for (std::size_t k = 0; k < paths.num_assets; ++k) os << ",S" << (k + 1);
  if (!paths.variance.empty()) os << ",Z";
  if (paths.exhaustive()) os << ",weight";
  os << '\n';
  const std::size_t grid = paths.times.size();
  std::ostringstream line;
  line.precision(17);
  for (std::size_t p = 0; p < paths.num_paths; ++p) {
    for (std::size_t m = 0; m < grid; ++m) {
      line.str("");
      line << p << ',' << m << ',' << paths.times[m];
      for (std::size_t k = 0; k < paths.num_assets; ++k) line << ',' << paths.price(p, m, k);
      if (!paths.variance.empty()) line << ',' << paths.variance[p * grid + m];
      if (paths.exhaustive()) line << ',' << paths.weights[p];
      os << line.str() << '\n';
    }
  }
}

}  // namespace relnash
