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

#ifndef RELNASH_UTILITY_HPP_
#define RELNASH_UTILITY_HPP_

#include <string>

namespace relnash {

enum class UtilityKind { kExponential, kPower, kCpt };

// Where the utility is finite. Outside the domain it is extended by -inf.
enum class UtilityDomain { kReals, kNonnegativeReals, kPositiveReals };

// S-shaped prospect-theory utility around a reference point xi:
//   U(y) = -a (xi - y)^delta_loss   for y <= xi
//   U(y) =  b (y - xi)^gamma         for y >  xi
// on terminal wealth y >= 0.
struct CptParams {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double delta_loss = 0.0;
  double xi = 0.0;
};

class UtilitySpec {
 public:
  // U(x) = -exp(-x / delta) on the real line.
  static UtilitySpec exponential(double delta);
  // U(x) = (1 - 1/delta)^{-1} x^{1 - 1/delta} on (0, inf), delta != 1.
  static UtilitySpec power(double delta);
  // Same family written as x^gamma / gamma, i.e. delta = 1 / (1 - gamma).
  static UtilitySpec power_from_gamma(double gamma);
  static UtilitySpec cpt(const CptParams& params);

  UtilityKind kind() const { return kind_; }
  UtilityDomain domain() const;
  // delta for exponential and power utilities; delta_loss is not exposed here.
  double risk_param() const { return delta_; }
  const CptParams& cpt_params() const { return cpt_; }

  // Utility of terminal wealth in the single-agent problem; -inf outside
  // the domain.
  double operator()(double wealth) const;

  // Utility of relative wealth X_i - (theta_i / n) sum_{j != i} X_j. For CPT
  // the reference point is the peer average, so this is U(relative + xi).
  double of_relative(double relative_wealth) const;

  // Amount added to the reduced capital to form the auxiliary budget
  // (xi for CPT, zero otherwise).
  double capital_shift() const;

  std::string describe() const;

 private:
  UtilityKind kind_ = UtilityKind::kExponential;
  double delta_ = 1.0;
  CptParams cpt_{};
};

bool in_domain(UtilityDomain domain, double x);

}  // namespace relnash

#endif  // RELNASH_UTILITY_HPP_
