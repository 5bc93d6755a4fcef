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

#ifndef RELNASH_TOOLS_CONFIG_HPP_
#define RELNASH_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "relnash/game.hpp"
#include "relnash/meanfield.hpp"
#include "relnash/simulation.hpp"

namespace relnash::cli {

using nlohmann::json;

// Validation failure located in the config file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, std::size_t line, const std::string& pointer,
              const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& pointer() const { return pointer_; }

 private:
  std::size_t line_;
  std::string pointer_;
};

// Parsed JSON plus the source line of every value, keyed by JSON pointer.
class SourceDocument {
 public:
  static SourceDocument parse(const std::string& text, const std::string& file);
  static SourceDocument load(const std::string& path);

  const json& root() const { return root_; }
  const std::string& file() const { return file_; }
  std::size_t line_of(const std::string& pointer) const;

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;

 private:
  json root_;
  std::string file_;
  std::map<std::string, std::size_t> lines_;
};

struct SimulationBlock {
  std::optional<std::size_t> paths;
  std::size_t steps = 50;
  std::optional<std::uint64_t> seed;
  bool antithetic = false;
  // CRR only: enumerate the whole tree when it fits.
  bool exhaustive = true;
  // Per-agent loss thresholds K_i (null to skip).
  std::vector<std::optional<double>> loss_thresholds;
};

struct Perturbation {
  std::size_t agent = 0;
  std::size_t asset = 0;
  double amount = 0.0;
};

struct VerificationBlock {
  std::optional<DeviationGrid> additive;
  std::optional<DeviationGrid> multiplicative;
  std::optional<Perturbation> perturbation;
};

struct MeanFieldBlock {
  std::vector<std::size_t> n_list;
  std::size_t repetitions = 20;
  std::uint64_t seed = 0;
  std::size_t fixed_point_paths = 1000;
  std::size_t fixed_point_steps = 10;
};

struct OutputBlock {
  std::optional<std::string> format;
  std::optional<std::string> path;
};

struct ExperimentConfig {
  MarketModel market;
  double horizon = 1.0;
  // Exactly one of these is set.
  std::optional<GameSpec> game;
  std::optional<PopulationSpec> population;
  SimulationBlock simulation;
  VerificationBlock verification;
  MeanFieldBlock meanfield;
  OutputBlock output;
};

ExperimentConfig parse_config(const SourceDocument& doc);

}  // namespace relnash::cli

#endif  // RELNASH_TOOLS_CONFIG_HPP_
