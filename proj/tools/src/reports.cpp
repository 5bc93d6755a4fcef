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

#include "reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace relnash::cli {
namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json estimate(const Estimate& e) { return {{"mean", number(e.mean)}, {"std_error", e.std_error}}; }

json amounts(const StrategyProcess& s) {
  json a = json::array();
  for (std::size_t k = 0; k < s.assets(); ++k) a.push_back(s(0, 0, k));
  return a;
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json gap(const GapEntry& g) {
  return {{"family", g.family == DeviationFamily::kAdditiveAmount ? "additive" : "multiplicative"},
          {"asset", g.asset < 0 ? json(nullptr) : json(g.asset)},
          {"value", g.value},
          {"improvement", number(g.improvement.mean)},
          {"std_error", g.improvement.std_error},
          {"domain_violations", g.domain_violations}};
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

void row(std::ostringstream& os, std::initializer_list<json> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) os << ',';
    os << cell(c);
    first = false;
  }
  os << '\n';
}

const json& field(const json& obj, const char* key) {
  static const json null_value;
  return obj.is_object() && obj.contains(key) ? obj.at(key) : null_value;
}

}  // namespace

json equilibrium_report(const GameSpec& game, const EquilibriumResult& eq) {
  json agents = json::array();
  for (std::size_t i = 0; i < game.size(); ++i) {
    const auto& a = game.agents[i];
    const auto& f = eq.feasibility[i];
    agents.push_back({{"index", i},
                      {"capital", a.initial_capital},
                      {"theta", a.competition_weight},
                      {"utility", a.utility.describe()},
                      {"reduced_capital", f.reduced_capital},
                      {"feasible", f.feasible},
                      {"theta_upper_bound", f.theta_upper_bound},
                      {"method", eq.single_agent[i].diagnostics.method},
                      {"single_agent_unique", eq.single_agent[i].unique},
                      {"aggregation_constant",
                       eq.aggregation_constants ? json((*eq.aggregation_constants)[i]) : json(nullptr)},
                      {"psi", amounts(eq.psi_star[i])},
                      {"phi", amounts(eq.phi_star[i])}});
  }
  return {{"report", "equilibrium"},
          {"version", 1},
          {"market", market_name(game.market)},
          {"assets", market_dimension(game.market)},
          {"horizon", game.horizon},
          {"n", game.size()},
          {"theta_hat", eq.theta_hat},
          {"residual", eq.residual},
          {"direct_solve_discrepancy", eq.direct_solve_discrepancy},
          {"unique", eq.unique},
          {"constant_in_time", eq.constant_in_time},
          {"agents", agents}};
}

json simulation_report(const GameSpec& game, const EquilibriumResult& eq, const RunInfo& run,
                       const SimulationReport& sim, const std::vector<std::optional<ExpMoments>>& closed) {
  json agents = json::array();
  for (std::size_t i = 0; i < game.size(); ++i) {
    const auto& a = sim.agents[i];
    json cf = nullptr;
    if (closed[i])
      cf = {{"aggregation_constant", closed[i]->aggregation_constant},
            {"expected_wealth", closed[i]->expected_wealth},
            {"loss_probability", closed[i]->loss_probability ? json(*closed[i]->loss_probability) : json(nullptr)}};
    agents.push_back({{"index", i},
                      {"phi", amounts(eq.phi_star[i])},
                      {"expected_utility", {{"mean", number(a.utility.mean)}, {"std_error", a.utility.std_error}}},
                      {"domain_violations", a.utility.domain_violations},
                      {"terminal_wealth", estimate(a.terminal_wealth)},
                      {"loss_threshold", a.loss_threshold ? json(*a.loss_threshold) : json(nullptr)},
                      {"loss_probability", a.loss_probability ? estimate(*a.loss_probability) : json(nullptr)},
                      {"closed_form", cf}});
  }
  return {{"report", "simulation"}, {"version", 1},          {"market", market_name(game.market)},
          {"horizon", game.horizon}, {"paths", run.paths},    {"steps", run.steps},
          {"seed", run.seed},        {"exact", run.exact},     {"agents", agents}};
}

json verification_report(const GameSpec& game, const RunInfo& run,
                         const std::vector<BestResponseReport>& reports,
                         const std::optional<AppliedPerturbation>& perturbation) {
  json agents = json::array();
  bool pass = true;
  for (const auto& r : reports) {
    json entries = json::array();
    for (const auto& g : r.entries) entries.push_back(gap(g));
    agents.push_back({{"index", r.agent},
                      {"equilibrium_utility",
                       {{"mean", number(r.equilibrium_utility.mean)}, {"std_error", r.equilibrium_utility.std_error}}},
                      {"max_improvement", r.max_improvement},
                      {"max_excess", r.max_excess},
                      {"threshold", r.threshold},
                      {"pass", r.pass},
                      {"worst", gap(r.entries.at(r.worst))},
                      {"entries", entries}});
    pass = pass && r.pass;
  }
  json pert = nullptr;
  if (perturbation)
    pert = {{"agent", perturbation->agent}, {"asset", perturbation->asset}, {"amount", perturbation->amount}};
  return {{"report", "verification"}, {"version", 1},       {"market", market_name(game.market)},
          {"horizon", game.horizon},   {"paths", run.paths}, {"steps", run.steps},
          {"seed", run.seed},          {"exact", run.exact}, {"perturbation", pert},
          {"pass", pass},              {"agents", agents}};
}

json meanfield_report(const PopulationSpec& population, const MarketModel& market, double horizon,
                      const MeanFieldEquilibrium& mfe, const std::optional<FixedPointRun>& fixed_point,
                      const std::optional<ConvergenceRun>& convergence) {
  json types = json::array();
  if (!mfe.sampled)
    for (std::size_t a = 0; a < mfe.support.size(); ++a) {
      const auto& t = mfe.support[a];
      types.push_back({{"capital", t.capital},
                       {"delta", t.delta},
                       {"theta", t.theta},
                       {"prob", t.prob},
                       {"psi", vec(mfe.psi_amounts[a])},
                       {"phi", vec(mfe.phi_amounts[a])}});
    }
  json fp = nullptr;
  if (fixed_point)
    fp = {{"residual", fixed_point->check.residual},   {"std_error", fixed_point->check.std_error},
          {"worst_path", fixed_point->check.worst_path}, {"exact", fixed_point->check.exact},
          {"paths", fixed_point->paths},               {"steps", fixed_point->steps},
          {"seed", fixed_point->seed}};
  json conv = nullptr;
  if (convergence) {
    json points = json::array();
    for (const auto& p : convergence->curve.points)
      points.push_back({{"n", p.n}, {"error", p.error.mean}, {"std_error", p.error.std_error},
                        {"resamples", p.resamples}});
    conv = {{"repetitions", convergence->repetitions},
            {"seed", convergence->seed},
            {"slope", number(convergence->curve.slope)},
            {"strictly_decreasing", convergence->curve.strictly_decreasing},
            {"points", points}};
  }
  return {{"report", "meanfield"},
          {"version", 1},
          {"market", market_name(market)},
          {"horizon", horizon},
          {"utility", population.utility == UtilityKind::kPower ? "power" : "exponential"},
          {"sampled", mfe.sampled},
          {"support_size", mfe.support.size()},
          {"theta_bar", mfe.theta_bar},
          {"capital_bar", mfe.capital_bar},
          {"constant_in_time", mfe.constant_in_time},
          {"mean_psi", vec(mfe.mean_psi)},
          {"types", types},
          {"fixed_point", fp},
          {"convergence", conv}};
}

std::string to_csv(const json& report) {
  std::ostringstream os;
  const std::string kind = report.at("report").get<std::string>();
  if (kind == "equilibrium") {
    row(os, {"agent", "asset", "capital", "theta", "reduced_capital", "aggregation_constant", "psi", "phi",
             "theta_hat", "residual"});
    for (const auto& a : report.at("agents"))
      for (std::size_t k = 0; k < a.at("phi").size(); ++k)
        row(os, {a.at("index"), k, a.at("capital"), a.at("theta"), a.at("reduced_capital"),
                 a.at("aggregation_constant"), a.at("psi")[k], a.at("phi")[k], report.at("theta_hat"),
                 report.at("residual")});
  } else if (kind == "simulation") {
    row(os, {"agent", "paths", "seed", "exact", "utility_mean", "utility_se", "domain_violations",
             "wealth_mean", "wealth_se", "loss_threshold", "loss_prob", "loss_prob_se", "closed_form_wealth",
             "closed_form_loss_prob"});
    for (const auto& a : report.at("agents"))
      row(os, {a.at("index"), report.at("paths"), report.at("seed"), report.at("exact"),
               a.at("expected_utility").at("mean"), a.at("expected_utility").at("std_error"),
               a.at("domain_violations"), a.at("terminal_wealth").at("mean"),
               a.at("terminal_wealth").at("std_error"), a.at("loss_threshold"),
               field(a.at("loss_probability"), "mean"), field(a.at("loss_probability"), "std_error"),
               field(a.at("closed_form"), "expected_wealth"), field(a.at("closed_form"), "loss_probability")});
  } else if (kind == "verification") {
    row(os, {"agent", "family", "asset", "value", "improvement", "std_error", "domain_violations", "threshold",
             "agent_pass"});
    for (const auto& a : report.at("agents"))
      for (const auto& g : a.at("entries"))
        row(os, {a.at("index"), g.at("family"), g.at("asset"), g.at("value"), g.at("improvement"),
                 g.at("std_error"), g.at("domain_violations"), a.at("threshold"), a.at("pass")});
  } else if (kind == "meanfield") {
    row(os, {"type", "asset", "capital", "delta", "theta", "prob", "psi", "phi", "theta_bar"});
    std::size_t t = 0;
    for (const auto& a : report.at("types")) {
      for (std::size_t k = 0; k < a.at("phi").size(); ++k)
        row(os, {t, k, a.at("capital"), a.at("delta"), a.at("theta"), a.at("prob"), a.at("psi")[k],
                 a.at("phi")[k], report.at("theta_bar")});
      ++t;
    }
  }
  return os.str();
}

std::string convergence_csv(const json& report) {
  std::ostringstream os;
  row(os, {"n", "error", "std_error", "resamples"});
  const json& conv = report.at("convergence");
  if (!conv.is_null())
    for (const auto& p : conv.at("points")) row(os, {p.at("n"), p.at("error"), p.at("std_error"), p.at("resamples")});
  return os.str();
}

}  // namespace relnash::cli
