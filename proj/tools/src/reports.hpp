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

#ifndef RELNASH_TOOLS_REPORTS_HPP_
#define RELNASH_TOOLS_REPORTS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relnash/equilibrium.hpp"
#include "relnash/meanfield.hpp"
#include "relnash/simulation.hpp"

namespace relnash::cli {

using nlohmann::json;

struct RunInfo {
  std::size_t paths = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  bool exact = false;
};

json equilibrium_report(const GameSpec& game, const EquilibriumResult& eq);

json simulation_report(const GameSpec& game, const EquilibriumResult& eq, const RunInfo& run,
                       const SimulationReport& sim, const std::vector<std::optional<ExpMoments>>& closed);

struct AppliedPerturbation {
  std::size_t agent = 0;
  std::size_t asset = 0;
  double amount = 0.0;
};

json verification_report(const GameSpec& game, const RunInfo& run,
                         const std::vector<BestResponseReport>& reports,
                         const std::optional<AppliedPerturbation>& perturbation);

struct FixedPointRun {
  FixedPointCheck check;
  std::size_t paths = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
};

struct ConvergenceRun {
  ConvergenceCurve curve;
  std::size_t repetitions = 0;
  std::uint64_t seed = 0;
};

json meanfield_report(const PopulationSpec& population, const MarketModel& market, double horizon,
                      const MeanFieldEquilibrium& mfe, const std::optional<FixedPointRun>& fixed_point,
                      const std::optional<ConvergenceRun>& convergence);

// Plot-ready tables, one row per agent (per agent and asset, per gap entry,
// per population type). Numbers use 17 significant digits so they read back
// to the same doubles as the JSON report.
std::string to_csv(const json& report);
std::string convergence_csv(const json& report);

}  // namespace relnash::cli

#endif  // RELNASH_TOOLS_REPORTS_HPP_
