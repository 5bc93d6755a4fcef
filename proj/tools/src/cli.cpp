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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "relnash/errors.hpp"
#include "reports.hpp"
#include "schema.hpp"

namespace relnash::cli {
namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::size_t threads = 1;
  std::optional<std::string> export_paths;
  std::optional<std::string> curve;
};

// Usage problems that are not tied to a config location.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

class Command {
 public:
  Command(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
    doc_ = SourceDocument::load(opt.config);
    cfg_ = parse_config(doc_);
  }

  int equilibrium() {
    const GameSpec& game = require_game();
    const auto eq = solve(game);
    emit(equilibrium_report(game, eq));
    return kExitOk;
  }

  int simulate() {
    const GameSpec& game = require_game();
    const auto eq = solve(game);
    const PathSet paths = make_paths(true);
    const auto realized = realize_equilibrium(eq, game, paths);
    const auto x0 = game.initial_capitals();
    const auto wealth = wealth_paths(realized.phi, paths, x0, false, opt_.threads);

    SimulationReport sim;
    std::vector<std::optional<ExpMoments>> closed(game.size());
    const auto& k = cfg_.simulation.loss_thresholds;
    for (std::size_t i = 0; i < game.size(); ++i) {
      AgentReport a;
      a.utility = expected_relative_utility(i, wealth, paths, game);
      a.terminal_wealth = wealth_mean(wealth.terminal[i], paths);
      if (i < k.size() && k[i]) {
        a.loss_threshold = k[i];
        a.loss_probability = loss_probability(wealth.terminal[i], *k[i], paths);
      }
      sim.agents.push_back(a);
    }
    if (closed_form_available(game)) {
      std::vector<std::optional<double>> thresholds = k;
      thresholds.resize(game.size());
      const auto m = bs_exp_moments(game, thresholds);
      for (std::size_t i = 0; i < game.size(); ++i) closed[i] = m[i];
    }
    emit(simulation_report(game, eq, run_info(paths), sim, closed));
    return kExitOk;
  }

  int verify() {
    const GameSpec& game = require_game();
    const auto eq = solve(game);
    const PathSet paths = make_paths(true);
    auto phi = realize_equilibrium(eq, game, paths).phi;

    std::optional<AppliedPerturbation> applied;
    if (const auto& p = cfg_.verification.perturbation) {
      StrategyProcess& s = phi[p->agent];
      if (s.is_constant() && s.quantity() == Quantity::kAmounts) {
        s(0, 0, p->asset) += p->amount;
      } else {
        std::vector<double> offset(s.assets(), 0.0);
        offset[p->asset] = p->amount;
        const auto extra = to_shares(StrategyProcess::constant(offset, Quantity::kAmounts), paths);
        for (std::size_t j = 0; j < s.values().size(); ++j) s.values()[j] += extra.values()[j];
      }
      applied = AppliedPerturbation{p->agent, p->asset, p->amount};
    }

    std::vector<DeviationGrid> grids;
    if (cfg_.verification.additive) grids.push_back(*cfg_.verification.additive);
    if (cfg_.verification.multiplicative) grids.push_back(*cfg_.verification.multiplicative);
    if (grids.empty()) {
      grids.push_back(DeviationGrid::additive(-1.0, 1.0, 0.05));
      grids.push_back(DeviationGrid::multiplicative(0.5, 1.5, 0.05));
    }

    std::vector<BestResponseReport> reports;
    for (std::size_t i = 0; i < game.size(); ++i)
      reports.push_back(best_response_gap(i, phi, grids, paths, game, opt_.threads));
    const json report = verification_report(game, run_info(paths), reports, applied);
    emit(report);
    return report.at("pass").get<bool>() ? kExitOk : kExitVerifyFail;
  }

  int meanfield() {
    if (!cfg_.population) doc_.fail("", "the meanfield command needs a \"population\" block");
    const PopulationSpec& pop = *cfg_.population;
    const auto mfe = mf_equilibrium(pop, cfg_.market, cfg_.horizon);

    const auto& m = cfg_.meanfield;
    std::optional<FixedPointRun> fp;
    const std::size_t fp_paths = opt_.paths.value_or(m.fixed_point_paths);
    const std::uint64_t seed = opt_.seed.value_or(m.seed);
    if (fp_paths > 0) {
      const PathSet paths = generate_paths(cfg_.market, cfg_.horizon, m.fixed_point_steps, fp_paths, seed,
                                           PathOptions{opt_.threads});
      fp = FixedPointRun{mf_fixed_point_check(mfe, paths, opt_.threads), paths.num_paths,
                         paths.times.size() - 1, seed};
    }
    std::optional<ConvergenceRun> conv;
    if (!m.n_list.empty())
      conv = ConvergenceRun{n_agent_to_mf_convergence(pop, cfg_.market, cfg_.horizon, m.n_list, m.repetitions, seed),
                            m.repetitions, seed};
    const json report = meanfield_report(pop, cfg_.market, cfg_.horizon, mfe, fp, conv);
    if (opt_.curve) write_file(*opt_.curve, convergence_csv(report));
    emit(report);
    return kExitOk;
  }

 private:
  const GameSpec& require_game() const {
    if (!cfg_.game) doc_.fail("", "this command needs an \"agents\" block");
    return *cfg_.game;
  }

  EquilibriumResult solve(const GameSpec& game) const {
    const auto feas = check_feasibility(game);
    for (std::size_t i = 0; i < feas.size(); ++i)
      if (!feas[i].feasible)
        doc_.fail("/agents/" + std::to_string(i),
                  "reduced capital " + std::to_string(feas[i].reduced_capital) +
                      " lies outside the utility domain (competition weight too high for this capital share)");
    return solve_equilibrium(game);
  }

  bool closed_form_available(const GameSpec& game) const {
    if (!std::holds_alternative<BlackScholesParams>(game.market)) return false;
    return std::all_of(game.agents.begin(), game.agents.end(),
                       [](const AgentProfile& a) { return a.utility.kind() == UtilityKind::kExponential; });
  }

  PathSet make_paths(bool need_seed) {
    const auto& s = cfg_.simulation;
    const std::optional<std::uint64_t> seed = opt_.seed ? opt_.seed : s.seed;
    if (need_seed && !seed)
      doc_.fail("/simulation", "a seed is required (set simulation.seed or pass --seed)");
    const std::optional<std::size_t> n = opt_.paths ? opt_.paths : s.paths;
    PathOptions po;
    po.threads = opt_.threads;
    po.antithetic = s.antithetic;
    PathSet paths;
    if (const auto* crr = std::get_if<CRRParams>(&cfg_.market)) {
      if (s.exhaustive && crr->steps <= kMaxExhaustiveSteps) {
        paths = build_crr_tree(*crr, cfg_.horizon);
      } else {
        if (!n) doc_.fail("/simulation", "Monte Carlo mode needs a path count (simulation.paths or --paths)");
        paths = simulate_crr(*crr, cfg_.horizon, *n, *seed, po);
      }
    } else {
      if (!n) doc_.fail("/simulation", "a path count is required (simulation.paths or --paths)");
      paths = generate_paths(cfg_.market, cfg_.horizon, s.steps, *n, *seed, po);
    }
    seed_ = *seed;
    if (opt_.export_paths) {
      std::ofstream f(*opt_.export_paths);
      if (!f) throw UsageError("cannot write " + *opt_.export_paths);
      write_pathset_csv(f, paths);
    }
    return paths;
  }

  RunInfo run_info(const PathSet& paths) const {
    return {paths.num_paths, paths.times.size() - 1, seed_, !paths.weights.empty()};
  }

  void emit(const json& report) {
    const auto problems = validate_against(report, report_schema(report.at("report").get<std::string>()));
    if (!problems.empty()) throw std::logic_error("report does not match its schema: " + problems.front());
    const std::string format = opt_.format.value_or(cfg_.output.format.value_or("json"));
    const std::string text = format == "csv" ? to_csv(report) : report.dump(2) + "\n";
    const std::optional<std::string> path = opt_.out ? opt_.out : cfg_.output.path;
    if (path) write_file(*path, text);
    else out_ << text;
  }

  const Options& opt_;
  std::ostream& out_;
  SourceDocument doc_;
  ExperimentConfig cfg_;
  std::uint64_t seed_ = 0;
};

void add_common(CLI::App* sub, Options& opt, bool simulation) {
  sub->add_option("--config", opt.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", opt.seed, "override the master seed");
  sub->add_option("--paths", opt.paths, "override the number of paths")->check(CLI::PositiveNumber);
  sub->add_option("--out", opt.out, "write the report to this file instead of stdout");
  sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  if (simulation) sub->add_option("--export-paths", opt.export_paths, "dump the simulated paths as CSV");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash equilibria for investors who care about relative wealth", "relnash"};
  app.require_subcommand(1);
  Options opt;
  auto* eq = app.add_subcommand("equilibrium", "solve the n-agent equilibrium");
  auto* sim = app.add_subcommand("simulate", "simulate equilibrium wealth, utilities and loss probabilities");
  auto* ver = app.add_subcommand("verify", "best-response check of the equilibrium on a deviation grid");
  auto* mf = app.add_subcommand("meanfield", "mean-field equilibrium, fixed-point check and n-agent convergence");
  add_common(eq, opt, false);
  add_common(sim, opt, true);
  add_common(ver, opt, true);
  add_common(mf, opt, false);
  mf->add_option("--curve", opt.curve, "write the convergence curve as CSV");

  std::string kind, file;
  auto* sch = app.add_subcommand("schema", "print the JSON schema of a report kind");
  sch->add_option("kind", kind)->required()->check(CLI::IsMember(report_kinds()));
  auto* chk = app.add_subcommand("validate-report", "check a JSON report against its schema");
  chk->add_option("file", file)->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*sch) {
      out << report_schema(kind).dump(2) << "\n";
      return kExitOk;
    }
    if (*chk) {
      std::ifstream f(file);
      json doc;
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        err << file << ": malformed JSON: " << e.what() << "\n";
        return kExitInvalid;
      }
      const auto k = doc.value("report", std::string());
      const auto names = report_kinds();
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        err << file << ": unknown report kind \"" << k << "\"\n";
        return kExitInvalid;
      }
      const auto problems = validate_against(doc, report_schema(k));
      for (const auto& p : problems) err << file << ": " << p << "\n";
      if (problems.empty()) out << file << ": valid " << k << " report\n";
      return problems.empty() ? kExitOk : kExitInvalid;
    }
    Command cmd(opt, out);
    if (*eq) return cmd.equilibrium();
    if (*sim) return cmd.simulate();
    if (*ver) return cmd.verify();
    return cmd.meanfield();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    err << "error: " << opt.config << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CapacityError& e) {
    err << "error: " << opt.config << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace relnash::cli
