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

#include "schema.hpp"

#include <map>
#include <stdexcept>

namespace relnash::cli {
namespace {

using nlohmann::json;

constexpr const char* kEstimate = R"({
  "type": "object", "additionalProperties": false,
  "required": ["mean", "std_error"],
  "properties": {"mean": {"type": ["number", "null"]}, "std_error": {"type": "number", "minimum": 0}}
})";

constexpr const char* kEquilibrium = R"({
  "type": "object", "additionalProperties": false,
  "required": ["report", "version", "market", "assets", "horizon", "n", "theta_hat",
               "residual", "direct_solve_discrepancy", "unique", "constant_in_time", "agents"],
  "properties": {
    "report": {"enum": ["equilibrium"]},
    "version": {"type": "integer", "minimum": 1},
    "market": {"enum": ["black_scholes", "levy", "heston", "crr"]},
    "assets": {"type": "integer", "minimum": 1},
    "horizon": {"type": "number", "minimum": 0},
    "n": {"type": "integer", "minimum": 1},
    "theta_hat": {"type": "number", "minimum": 0, "maximum": 1},
    "residual": {"type": "number", "minimum": 0},
    "direct_solve_discrepancy": {"type": "number", "minimum": 0},
    "unique": {"type": "boolean"},
    "constant_in_time": {"type": "boolean"},
    "agents": {"type": "array", "items": {
      "type": "object", "additionalProperties": false,
      "required": ["index", "capital", "theta", "utility", "reduced_capital", "feasible",
                   "theta_upper_bound", "method", "single_agent_unique",
                   "aggregation_constant", "psi", "phi"],
      "properties": {
        "index": {"type": "integer", "minimum": 0},
        "capital": {"type": "number"},
        "theta": {"type": "number", "minimum": 0, "maximum": 1},
        "utility": {"type": "string"},
        "reduced_capital": {"type": "number"},
        "feasible": {"type": "boolean"},
        "theta_upper_bound": {"type": "number", "minimum": 0, "maximum": 1},
        "method": {"type": "string"},
        "single_agent_unique": {"type": "boolean"},
        "aggregation_constant": {"type": ["number", "null"]},
        "psi": {"type": "array", "items": {"type": "number"}},
        "phi": {"type": "array", "items": {"type": "number"}}
      }}}
  }
})";

constexpr const char* kSimulation = R"({
  "type": "object", "additionalProperties": false,
  "required": ["report", "version", "market", "horizon", "paths", "steps", "seed", "exact", "agents"],
  "properties": {
    "report": {"enum": ["simulation"]},
    "version": {"type": "integer", "minimum": 1},
    "market": {"enum": ["black_scholes", "levy", "heston", "crr"]},
    "horizon": {"type": "number", "minimum": 0},
    "paths": {"type": "integer", "minimum": 1},
    "steps": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
    "exact": {"type": "boolean"},
    "agents": {"type": "array", "items": {
      "type": "object", "additionalProperties": false,
      "required": ["index", "phi", "expected_utility", "domain_violations", "terminal_wealth",
                   "loss_threshold", "loss_probability", "closed_form"],
      "properties": {
        "index": {"type": "integer", "minimum": 0},
        "phi": {"type": "array", "items": {"type": "number"}},
        "expected_utility": {"$ref": "estimate"},
        "domain_violations": {"type": "integer", "minimum": 0},
        "terminal_wealth": {"$ref": "estimate"},
        "loss_threshold": {"type": ["number", "null"]},
        "loss_probability": {"type": ["object", "null"], "$ref": "estimate"},
        "closed_form": {"type": ["object", "null"], "additionalProperties": false,
          "required": ["aggregation_constant", "expected_wealth", "loss_probability"],
          "properties": {
            "aggregation_constant": {"type": "number"},
            "expected_wealth": {"type": "number"},
            "loss_probability": {"type": ["number", "null"], "minimum": 0, "maximum": 1}
          }}
      }}}
  }
})";

constexpr const char* kVerification = R"({
  "type": "object", "additionalProperties": false,
  "required": ["report", "version", "market", "horizon", "paths", "steps", "seed", "exact",
               "perturbation", "pass", "agents"],
  "properties": {
    "report": {"enum": ["verification"]},
    "version": {"type": "integer", "minimum": 1},
    "market": {"enum": ["black_scholes", "levy", "heston", "crr"]},
    "horizon": {"type": "number", "minimum": 0},
    "paths": {"type": "integer", "minimum": 1},
    "steps": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
    "exact": {"type": "boolean"},
    "perturbation": {"type": ["object", "null"], "additionalProperties": false,
      "required": ["agent", "asset", "amount"],
      "properties": {"agent": {"type": "integer", "minimum": 0},
                     "asset": {"type": "integer", "minimum": 0},
                     "amount": {"type": "number"}}},
    "pass": {"type": "boolean"},
    "agents": {"type": "array", "items": {
      "type": "object", "additionalProperties": false,
      "required": ["index", "equilibrium_utility", "max_improvement", "max_excess", "threshold", "pass",
                   "worst", "entries"],
      "properties": {
        "index": {"type": "integer", "minimum": 0},
        "equilibrium_utility": {"$ref": "estimate"},
        "max_improvement": {"type": "number"},
        "max_excess": {"type": "number"},
        "threshold": {"type": "number", "minimum": 0},
        "pass": {"type": "boolean"},
        "worst": {"$ref": "gap"},
        "entries": {"type": "array", "items": {"$ref": "gap"}}
      }}}
  }
})";

constexpr const char* kGap = R"({
  "type": "object", "additionalProperties": false,
  "required": ["family", "asset", "value", "improvement", "std_error", "domain_violations"],
  "properties": {
    "family": {"enum": ["additive", "multiplicative"]},
    "asset": {"type": ["integer", "null"], "minimum": 0},
    "value": {"type": "number"},
    "improvement": {"type": ["number", "null"]},
    "std_error": {"type": "number", "minimum": 0},
    "domain_violations": {"type": "integer", "minimum": 0}
  }
})";

constexpr const char* kMeanField = R"({
  "type": "object", "additionalProperties": false,
  "required": ["report", "version", "market", "horizon", "utility", "sampled", "support_size",
               "theta_bar", "capital_bar", "constant_in_time", "mean_psi", "types",
               "fixed_point", "convergence"],
  "properties": {
    "report": {"enum": ["meanfield"]},
    "version": {"type": "integer", "minimum": 1},
    "market": {"enum": ["black_scholes", "levy", "heston", "crr"]},
    "horizon": {"type": "number", "minimum": 0},
    "utility": {"enum": ["exponential", "power"]},
    "sampled": {"type": "boolean"},
    "support_size": {"type": "integer", "minimum": 1},
    "theta_bar": {"type": "number", "minimum": 0, "maximum": 1},
    "capital_bar": {"type": "number"},
    "constant_in_time": {"type": "boolean"},
    "mean_psi": {"type": "array", "items": {"type": "number"}},
    "types": {"type": "array", "items": {
      "type": "object", "additionalProperties": false,
      "required": ["capital", "delta", "theta", "prob", "psi", "phi"],
      "properties": {
        "capital": {"type": "number"}, "delta": {"type": "number", "minimum": 0},
        "theta": {"type": "number", "minimum": 0, "maximum": 1},
        "prob": {"type": "number", "minimum": 0, "maximum": 1},
        "psi": {"type": "array", "items": {"type": "number"}},
        "phi": {"type": "array", "items": {"type": "number"}}
      }}},
    "fixed_point": {"type": ["object", "null"], "additionalProperties": false,
      "required": ["residual", "std_error", "worst_path", "exact", "paths", "steps", "seed"],
      "properties": {
        "residual": {"type": "number", "minimum": 0},
        "std_error": {"type": "number", "minimum": 0},
        "worst_path": {"type": "integer", "minimum": 0},
        "exact": {"type": "boolean"},
        "paths": {"type": "integer", "minimum": 1},
        "steps": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0}
      }},
    "convergence": {"type": ["object", "null"], "additionalProperties": false,
      "required": ["repetitions", "seed", "slope", "strictly_decreasing", "points"],
      "properties": {
        "repetitions": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "slope": {"type": ["number", "null"]},
        "strictly_decreasing": {"type": "boolean"},
        "points": {"type": "array", "items": {
          "type": "object", "additionalProperties": false,
          "required": ["n", "error", "std_error", "resamples"],
          "properties": {
            "n": {"type": "integer", "minimum": 1},
            "error": {"type": "number", "minimum": 0},
            "std_error": {"type": "number", "minimum": 0},
            "resamples": {"type": "integer", "minimum": 0}
          }}}
      }}
  }
})";

const std::map<std::string, json>& schemas() {
  static const std::map<std::string, json> s = {
      {"equilibrium", json::parse(kEquilibrium)}, {"simulation", json::parse(kSimulation)},
      {"verification", json::parse(kVerification)}, {"meanfield", json::parse(kMeanField)},
      {"estimate", json::parse(kEstimate)}, {"gap", json::parse(kGap)}};
  return s;
}

bool has_type(const json& v, const std::string& t) {
  if (t == "null") return v.is_null();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "string") return v.is_string();
  if (t == "array") return v.is_array();
  if (t == "object") return v.is_object();
  return false;
}

void check(const json& v, const json& schema, const std::string& ptr, std::vector<std::string>& out) {
  if (schema.contains("type")) {
    const json& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) ok = has_type(v, t.get<std::string>());
    else
      for (const auto& e : t) ok = ok || has_type(v, e.get<std::string>());
    if (!ok) {
      out.push_back(ptr + ": expected type " + t.dump());
      return;
    }
  }
  if (v.is_null()) return;
  if (schema.contains("$ref")) check(v, schemas().at(schema.at("$ref").get<std::string>()), ptr, out);
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema.at("enum")) found = found || e == v;
    if (!found) out.push_back(ptr + ": value " + v.dump() + " not in " + schema.at("enum").dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema.at("minimum").get<double>())
      out.push_back(ptr + ": below minimum " + schema.at("minimum").dump());
    if (schema.contains("maximum") && x > schema.at("maximum").get<double>())
      out.push_back(ptr + ": above maximum " + schema.at("maximum").dump());
  }
  if (v.is_object()) {
    if (schema.contains("required"))
      for (const auto& k : schema.at("required"))
        if (!v.contains(k.get<std::string>())) out.push_back(ptr + ": missing key " + k.dump());
    const json props = schema.value("properties", json::object());
    for (const auto& [k, sub] : v.items()) {
      if (props.contains(k)) check(sub, props.at(k), ptr + "/" + k, out);
      else if (schema.contains("additionalProperties") && schema.at("additionalProperties") == false)
        out.push_back(ptr + "/" + k + ": unexpected key");
    }
  }
  if (v.is_array() && schema.contains("items"))
    for (std::size_t j = 0; j < v.size(); ++j)
      check(v[j], schema.at("items"), ptr + "/" + std::to_string(j), out);
}

void inline_refs(json& s) {
  if (s.is_object()) {
    if (s.contains("$ref")) {
      json target = schemas().at(s.at("$ref").get<std::string>());
      s.erase("$ref");
      for (auto& [k, v] : target.items())
        if (!s.contains(k)) s[k] = v;
    }
    for (auto& [k, v] : s.items()) inline_refs(v);
  } else if (s.is_array()) {
    for (auto& v : s) inline_refs(v);
  }
}

}  // namespace

json report_schema(const std::string& kind) {
  if (kind == "estimate" || kind == "gap") throw std::out_of_range("unknown report kind: " + kind);
  json s = schemas().at(kind);
  inline_refs(s);
  return s;
}

std::vector<std::string> report_kinds() { return {"equilibrium", "simulation", "verification", "meanfield"}; }

std::vector<std::string> validate_against(const json& doc, const json& schema) {
  std::vector<std::string> out;
  check(doc, schema, "", out);
  return out;
}

}  // namespace relnash::cli
