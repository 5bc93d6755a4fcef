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

#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "relnash/errors.hpp"

namespace relnash::cli {

ConfigError::ConfigError(const std::string& file, std::size_t line, const std::string& pointer,
                         const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " +
                         (pointer.empty() ? std::string("/") : pointer) + ": " + message),
      line_(line),
      pointer_(pointer) {}

namespace {

// Forward iterator over the text that records how far the lexer has read.
class TrackingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator(const char* p, const char** high) : p_(p), high_(high) {}
  reference operator*() const { return *p_; }
  TrackingIterator& operator++() {
    ++p_;
    if (p_ > *high_) *high_ = p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const TrackingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const TrackingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  const char** high_;
};

std::string escape_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// Records the line of every value. The lexer may have consumed one
// character past a number, so that character is not counted.
class LineRecorder : public nlohmann::json_sax<json> {
 public:
  LineRecorder(const char* begin, const char** high, std::map<std::string, std::size_t>& lines)
      : begin_(begin), high_(high), lines_(lines) {}

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override {
    frames_.push_back({element_pointer(), false, 0, {}});
    return true;
  }
  bool key(string_t& k) override {
    frames_.back().key = k;
    lines_.emplace(frames_.back().pointer + "/" + escape_token(k), current_line());
    return true;
  }
  bool end_object() override {
    frames_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    frames_.push_back({element_pointer(), true, 0, {}});
    return true;
  }
  bool end_array() override {
    frames_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    std::string pointer;
    bool array;
    std::size_t index;
    std::string key;
  };

  std::size_t current_line() const {
    const char* end = *high_ > begin_ ? *high_ - 1 : begin_;
    return 1 + static_cast<std::size_t>(std::count(begin_, end, '\n'));
  }

  std::string element_pointer() {
    std::string ptr;
    if (!frames_.empty()) {
      Frame& f = frames_.back();
      ptr = f.pointer + "/" + (f.array ? std::to_string(f.index++) : escape_token(f.key));
    }
    lines_.emplace(ptr, current_line());
    return ptr;
  }

  bool value() {
    element_pointer();
    return true;
  }

  const char* begin_;
  const char** high_;
  std::map<std::string, std::size_t>& lines_;
  std::vector<Frame> frames_;
};

}  // namespace

SourceDocument SourceDocument::parse(const std::string& text, const std::string& file) {
  SourceDocument doc;
  doc.file_ = file;
  try {
    doc.root_ = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C" in the message.
    throw ConfigError(file, 0, "", std::string("malformed JSON: ") + e.what());
  }
  const char* high = text.data();
  LineRecorder rec(text.data(), &high, doc.lines_);
  TrackingIterator first(text.data(), &high), last(text.data() + text.size(), &high);
  json::sax_parse(first, last, &rec);
  return doc;
}

SourceDocument SourceDocument::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "", "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::size_t SourceDocument::line_of(const std::string& pointer) const {
  // Fall back to the closest recorded ancestor.
  std::string p = pointer;
  for (;;) {
    const auto it = lines_.find(p);
    if (it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    p.erase(p.rfind('/'));
  }
}

void SourceDocument::fail(const std::string& pointer, const std::string& message) const {
  throw ConfigError(file_, line_of(pointer), pointer, message);
}

namespace {

class Reader {
 public:
  explicit Reader(const SourceDocument& doc) : doc_(doc) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const { doc_.fail(ptr, msg); }

  const json& object(const json& node, const std::string& ptr,
                     std::initializer_list<const char*> allowed) const {
    if (!node.is_object()) fail(ptr, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : node.items())
      if (!keys.count(k)) fail(ptr + "/" + escape_token(k), "unknown key");
    return node;
  }

  bool has(const json& obj, const char* key) const { return obj.contains(key) && !obj.at(key).is_null(); }

  const json& member(const json& obj, const std::string& ptr, const char* key) const {
    if (!obj.contains(key)) fail(ptr, std::string("missing required key \"") + key + "\"");
    return obj.at(key);
  }

  double number(const json& node, const std::string& ptr) const {
    if (!node.is_number()) fail(ptr, "expected a number");
    return node.get<double>();
  }
  double number(const json& obj, const std::string& ptr, const char* key) const {
    return number(member(obj, ptr, key), ptr + "/" + key);
  }
  double number_or(const json& obj, const std::string& ptr, const char* key, double fallback) const {
    return has(obj, key) ? number(obj, ptr, key) : fallback;
  }

  std::uint64_t unsigned_integer(const json& node, const std::string& ptr) const {
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0))
      fail(ptr, "expected a non-negative integer");
    return node.get<std::uint64_t>();
  }
  std::uint64_t unsigned_integer(const json& obj, const std::string& ptr, const char* key) const {
    return unsigned_integer(member(obj, ptr, key), ptr + "/" + key);
  }

  bool boolean(const json& obj, const std::string& ptr, const char* key, bool fallback) const {
    if (!has(obj, key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(ptr + "/" + key, "expected true or false");
    return obj.at(key).get<bool>();
  }

  std::string string(const json& obj, const std::string& ptr, const char* key) const {
    const json& v = member(obj, ptr, key);
    if (!v.is_string()) fail(ptr + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  const json& array(const json& node, const std::string& ptr) const {
    if (!node.is_array()) fail(ptr, "expected an array");
    return node;
  }

  // A number is accepted as a vector of length one.
  Eigen::VectorXd vector(const json& node, const std::string& ptr) const {
    if (node.is_number()) return Eigen::VectorXd::Constant(1, node.get<double>());
    array(node, ptr);
    if (node.empty()) fail(ptr, "expected a non-empty array");
    Eigen::VectorXd v(node.size());
    for (std::size_t k = 0; k < node.size(); ++k) v(k) = number(node[k], ptr + "/" + std::to_string(k));
    return v;
  }

  Eigen::MatrixXd matrix(const json& node, const std::string& ptr, std::size_t d) const {
    if (node.is_number()) {
      if (d != 1) fail(ptr, "scalar volatility needs a one-dimensional market");
      return Eigen::MatrixXd::Constant(1, 1, node.get<double>());
    }
    array(node, ptr);
    if (node.size() != d) fail(ptr, "expected " + std::to_string(d) + " rows");
    Eigen::MatrixXd m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      const std::string rp = ptr + "/" + std::to_string(r);
      array(node[r], rp);
      if (node[r].size() != d) fail(rp, "expected " + std::to_string(d) + " columns");
      for (std::size_t c = 0; c < d; ++c) m(r, c) = number(node[r][c], rp + "/" + std::to_string(c));
    }
    return m;
  }

 private:
  const SourceDocument& doc_;
};

MarketModel parse_market(const Reader& r, const json& node, const std::string& ptr) {
  if (!node.is_object()) r.fail(ptr, "expected an object");
  const std::string type = r.string(node, ptr, "type");
  if (type == "black_scholes") {
    r.object(node, ptr, {"type", "mu", "sigma", "s0"});
    BlackScholesParams p;
    p.mu = r.vector(r.member(node, ptr, "mu"), ptr + "/mu");
    const auto d = static_cast<std::size_t>(p.mu.size());
    p.sigma = r.matrix(r.member(node, ptr, "sigma"), ptr + "/sigma", d);
    p.s0 = r.has(node, "s0") ? r.vector(node.at("s0"), ptr + "/s0") : Eigen::VectorXd::Ones(d);
    if (static_cast<std::size_t>(p.s0.size()) != d) r.fail(ptr + "/s0", "length must match mu");
    return p;
  }
  if (type == "levy") {
    r.object(node, ptr, {"type", "mu", "sigma", "s0", "intensity", "atoms"});
    LevyJumpParams p;
    p.mu = r.vector(r.member(node, ptr, "mu"), ptr + "/mu");
    const auto d = static_cast<std::size_t>(p.mu.size());
    p.sigma = r.matrix(r.member(node, ptr, "sigma"), ptr + "/sigma", d);
    p.s0 = r.has(node, "s0") ? r.vector(node.at("s0"), ptr + "/s0") : Eigen::VectorXd::Ones(d);
    if (static_cast<std::size_t>(p.s0.size()) != d) r.fail(ptr + "/s0", "length must match mu");
    p.intensity = r.number(node, ptr, "intensity");
    const json& atoms = r.array(r.member(node, ptr, "atoms"), ptr + "/atoms");
    for (std::size_t m = 0; m < atoms.size(); ++m) {
      const std::string ap = ptr + "/atoms/" + std::to_string(m);
      r.object(atoms[m], ap, {"z", "prob"});
      JumpAtom a{r.vector(r.member(atoms[m], ap, "z"), ap + "/z"), r.number(atoms[m], ap, "prob")};
      if (static_cast<std::size_t>(a.z.size()) != d) r.fail(ap + "/z", "length must match mu");
      p.atoms.push_back(std::move(a));
    }
    return p;
  }
  if (type == "heston") {
    r.object(node, ptr, {"type", "lambda", "kappa", "mean_level", "vol_of_vol", "rho", "z0", "s0"});
    HestonParams p;
    p.lambda_mpr = r.number(node, ptr, "lambda");
    p.kappa = r.number(node, ptr, "kappa");
    p.mean_level = r.number(node, ptr, "mean_level");
    p.vol_of_vol = r.number(node, ptr, "vol_of_vol");
    p.rho = r.number_or(node, ptr, "rho", 0.0);
    p.z0 = r.number(node, ptr, "z0");
    p.s0 = r.number_or(node, ptr, "s0", 1.0);
    return p;
  }
  if (type == "crr") {
    r.object(node, ptr, {"type", "u", "d", "p", "s0", "steps"});
    CRRParams p;
    p.u = r.number(node, ptr, "u");
    p.d = r.number(node, ptr, "d");
    p.p = r.number(node, ptr, "p");
    p.s0 = r.number_or(node, ptr, "s0", 1.0);
    p.steps = r.unsigned_integer(node, ptr, "steps");
    return p;
  }
  r.fail(ptr + "/type", "unknown market type \"" + type +
                            "\" (expected black_scholes, levy, heston or crr)");
}

UtilitySpec parse_utility(const Reader& r, const json& node, const std::string& ptr) {
  if (!node.is_object()) r.fail(ptr, "expected an object");
  const std::string type = r.string(node, ptr, "type");
  try {
    if (type == "exponential") {
      r.object(node, ptr, {"type", "delta"});
      return UtilitySpec::exponential(r.number(node, ptr, "delta"));
    }
    if (type == "power") {
      r.object(node, ptr, {"type", "delta", "gamma"});
      if (r.has(node, "delta") == r.has(node, "gamma"))
        r.fail(ptr, "power utility needs exactly one of \"delta\" or \"gamma\"");
      return r.has(node, "delta") ? UtilitySpec::power(r.number(node, ptr, "delta"))
                                  : UtilitySpec::power_from_gamma(r.number(node, ptr, "gamma"));
    }
    if (type == "cpt") {
      r.object(node, ptr, {"type", "a", "b", "gamma", "delta_loss", "xi"});
      CptParams c;
      c.a = r.number(node, ptr, "a");
      c.b = r.number(node, ptr, "b");
      c.gamma = r.number(node, ptr, "gamma");
      c.delta_loss = r.number(node, ptr, "delta_loss");
      c.xi = r.number(node, ptr, "xi");
      return UtilitySpec::cpt(c);
    }
  } catch (const InvalidInput& e) {
    r.fail(ptr, e.what());
  }
  r.fail(ptr + "/type", "unknown utility type \"" + type + "\" (expected exponential, power or cpt)");
}

Marginal parse_marginal(const Reader& r, const json& node, const std::string& ptr) {
  if (node.is_number()) return Marginal::constant(node.get<double>());
  if (!node.is_object()) r.fail(ptr, "expected a number or an object");
  const std::string kind = r.string(node, ptr, "kind");
  if (kind == "uniform") {
    r.object(node, ptr, {"kind", "lo", "hi"});
    return Marginal::uniform(r.number(node, ptr, "lo"), r.number(node, ptr, "hi"));
  }
  if (kind == "atoms") {
    r.object(node, ptr, {"kind", "values", "probs"});
    const Eigen::VectorXd v = r.vector(r.member(node, ptr, "values"), ptr + "/values");
    const Eigen::VectorXd p = r.vector(r.member(node, ptr, "probs"), ptr + "/probs");
    if (v.size() != p.size()) r.fail(ptr + "/probs", "length must match values");
    return Marginal::atoms({v.data(), v.data() + v.size()}, {p.data(), p.data() + p.size()});
  }
  r.fail(ptr + "/kind", "unknown marginal kind \"" + kind + "\" (expected uniform or atoms)");
}

PopulationSpec parse_population(const Reader& r, const json& node, const std::string& ptr) {
  r.object(node, ptr, {"utility", "atoms", "capital", "delta", "theta", "samples", "seed"});
  PopulationSpec p;
  const std::string u = r.has(node, "utility") ? r.string(node, ptr, "utility") : "exponential";
  if (u == "exponential") p.utility = UtilityKind::kExponential;
  else if (u == "power") p.utility = UtilityKind::kPower;
  else r.fail(ptr + "/utility", "mean-field populations support exponential or power utility");
  if (r.has(node, "atoms")) {
    for (const char* k : {"capital", "delta", "theta"})
      if (r.has(node, k)) r.fail(ptr + "/" + k, "give either atoms or marginals, not both");
    const json& atoms = r.array(node.at("atoms"), ptr + "/atoms");
    for (std::size_t m = 0; m < atoms.size(); ++m) {
      const std::string ap = ptr + "/atoms/" + std::to_string(m);
      r.object(atoms[m], ap, {"capital", "delta", "theta", "prob"});
      p.atoms.push_back({r.number(atoms[m], ap, "capital"), r.number(atoms[m], ap, "delta"),
                         r.number(atoms[m], ap, "theta"), r.number(atoms[m], ap, "prob")});
    }
  } else {
    p.capital = parse_marginal(r, r.member(node, ptr, "capital"), ptr + "/capital");
    p.delta = parse_marginal(r, r.member(node, ptr, "delta"), ptr + "/delta");
    p.theta = parse_marginal(r, r.member(node, ptr, "theta"), ptr + "/theta");
    if (r.has(node, "samples")) p.samples = r.unsigned_integer(node, ptr, "samples");
    p.seed = r.unsigned_integer(node, ptr, "seed");
  }
  try {
    validate(p);
  } catch (const InvalidInput& e) {
    r.fail(ptr, e.what());
  }
  return p;
}

DeviationGrid parse_grid(const Reader& r, const json& node, const std::string& ptr, bool additive) {
  r.object(node, ptr, {"lo", "hi", "step"});
  const double lo = r.number(node, ptr, "lo"), hi = r.number(node, ptr, "hi"),
               step = r.number(node, ptr, "step");
  try {
    return additive ? DeviationGrid::additive(lo, hi, step) : DeviationGrid::multiplicative(lo, hi, step);
  } catch (const InvalidInput& e) {
    r.fail(ptr, e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const SourceDocument& doc) {
  const Reader r(doc);
  const json& root = r.object(doc.root(), "", {"market", "horizon", "agents", "population", "simulation",
                                               "verification", "meanfield", "output", "description"});
  ExperimentConfig cfg;
  cfg.market = parse_market(r, r.member(root, "", "market"), "/market");
  try {
    validate(cfg.market);
  } catch (const InvalidInput& e) {
    r.fail("/market", e.what());
  }
  cfg.horizon = r.number_or(root, "", "horizon", 1.0);
  if (!(cfg.horizon > 0.0)) r.fail("/horizon", "horizon must be positive (years)");

  const bool has_agents = r.has(root, "agents"), has_pop = r.has(root, "population");
  if (has_agents == has_pop) r.fail("", "exactly one of \"agents\" or \"population\" is required");

  if (has_agents) {
    const json& agents = r.array(root.at("agents"), "/agents");
    if (agents.empty()) r.fail("/agents", "at least one agent is required");
    GameSpec g;
    g.market = cfg.market;
    g.horizon = cfg.horizon;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string ap = "/agents/" + std::to_string(i);
      r.object(agents[i], ap, {"capital", "theta", "utility", "name"});
      AgentProfile a;
      a.initial_capital = r.number(agents[i], ap, "capital");
      a.competition_weight = r.number(agents[i], ap, "theta");
      if (!(a.competition_weight >= 0.0 && a.competition_weight <= 1.0))
        r.fail(ap + "/theta", "competition weight must lie in [0, 1]");
      a.utility = parse_utility(r, r.member(agents[i], ap, "utility"), ap + "/utility");
      g.agents.push_back(a);
    }
    try {
      validate(g);
    } catch (const InvalidInput& e) {
      r.fail("/agents", e.what());
    }
    cfg.game = std::move(g);
  } else {
    cfg.population = parse_population(r, root.at("population"), "/population");
  }

  if (r.has(root, "simulation")) {
    const std::string sp = "/simulation";
    const json& s = r.object(root.at("simulation"), sp,
                             {"paths", "steps", "seed", "antithetic", "exhaustive", "loss_thresholds"});
    if (r.has(s, "paths")) cfg.simulation.paths = r.unsigned_integer(s, sp, "paths");
    if (r.has(s, "steps")) cfg.simulation.steps = r.unsigned_integer(s, sp, "steps");
    if (r.has(s, "seed")) cfg.simulation.seed = r.unsigned_integer(s, sp, "seed");
    cfg.simulation.antithetic = r.boolean(s, sp, "antithetic", false);
    cfg.simulation.exhaustive = r.boolean(s, sp, "exhaustive", true);
    if (cfg.simulation.steps == 0) r.fail(sp + "/steps", "steps must be positive");
    if (r.has(s, "loss_thresholds")) {
      const json& k = r.array(s.at("loss_thresholds"), sp + "/loss_thresholds");
      const std::size_t n = cfg.game ? cfg.game->agents.size() : 0;
      if (k.size() != n) r.fail(sp + "/loss_thresholds", "need one entry (number or null) per agent");
      for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i].is_null()) {
          cfg.simulation.loss_thresholds.emplace_back();
          continue;
        }
        const std::string kp = sp + "/loss_thresholds/" + std::to_string(i);
        const double v = r.number(k[i], kp);
        if (!(v < cfg.game->agents[i].initial_capital))
          r.fail(kp, "loss threshold must lie below the agent's initial capital");
        cfg.simulation.loss_thresholds.emplace_back(v);
      }
    }
  }

  if (r.has(root, "verification")) {
    const std::string vp = "/verification";
    const json& v = r.object(root.at("verification"), vp, {"additive", "multiplicative", "perturbation"});
    if (r.has(v, "additive")) cfg.verification.additive = parse_grid(r, v.at("additive"), vp + "/additive", true);
    if (r.has(v, "multiplicative"))
      cfg.verification.multiplicative = parse_grid(r, v.at("multiplicative"), vp + "/multiplicative", false);
    if (r.has(v, "perturbation")) {
      const std::string pp = vp + "/perturbation";
      const json& p = r.object(v.at("perturbation"), pp, {"agent", "asset", "amount"});
      Perturbation pert;
      pert.agent = r.unsigned_integer(p, pp, "agent");
      pert.asset = r.has(p, "asset") ? r.unsigned_integer(p, pp, "asset") : 0;
      pert.amount = r.number(p, pp, "amount");
      const std::size_t n = cfg.game ? cfg.game->agents.size() : 0;
      if (pert.agent >= n) r.fail(pp + "/agent", "agent index out of range");
      if (pert.asset >= market_dimension(cfg.market)) r.fail(pp + "/asset", "asset index out of range");
      cfg.verification.perturbation = pert;
    }
  }

  if (r.has(root, "meanfield")) {
    const std::string mp = "/meanfield";
    const json& m = r.object(root.at("meanfield"), mp,
                             {"n_list", "repetitions", "seed", "fixed_point_paths", "fixed_point_steps"});
    if (r.has(m, "n_list")) {
      const json& l = r.array(m.at("n_list"), mp + "/n_list");
      for (std::size_t j = 0; j < l.size(); ++j) {
        const auto n = r.unsigned_integer(l[j], mp + "/n_list/" + std::to_string(j));
        if (n == 0) r.fail(mp + "/n_list/" + std::to_string(j), "game size must be positive");
        cfg.meanfield.n_list.push_back(n);
      }
    }
    if (r.has(m, "repetitions")) cfg.meanfield.repetitions = r.unsigned_integer(m, mp, "repetitions");
    if (r.has(m, "seed")) cfg.meanfield.seed = r.unsigned_integer(m, mp, "seed");
    if (r.has(m, "fixed_point_paths")) cfg.meanfield.fixed_point_paths = r.unsigned_integer(m, mp, "fixed_point_paths");
    if (r.has(m, "fixed_point_steps")) cfg.meanfield.fixed_point_steps = r.unsigned_integer(m, mp, "fixed_point_steps");
    if (cfg.meanfield.repetitions == 0) r.fail(mp + "/repetitions", "must be positive");
    if (cfg.meanfield.fixed_point_steps == 0) r.fail(mp + "/fixed_point_steps", "must be positive");
  }

  if (r.has(root, "output")) {
    const json& o = r.object(root.at("output"), "/output", {"format", "path"});
    if (r.has(o, "format")) {
      cfg.output.format = r.string(o, "/output", "format");
      if (*cfg.output.format != "json" && *cfg.output.format != "csv")
        r.fail("/output/format", "format must be \"json\" or \"csv\"");
    }
    if (r.has(o, "path")) cfg.output.path = r.string(o, "/output", "path");
  }
  return cfg;
}

}  // namespace relnash::cli
