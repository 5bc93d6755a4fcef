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

#include "relnash/utility.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "relnash/errors.hpp"

namespace relnash {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

UtilitySpec UtilitySpec::exponential(double delta) {
  detail::require(delta > 0.0 && std::isfinite(delta),
                  "exponential utility: delta must be positive");
  UtilitySpec u;
  u.kind_ = UtilityKind::kExponential;
  u.delta_ = delta;
  return u;
}

UtilitySpec UtilitySpec::power(double delta) {
  detail::require(delta > 0.0 && std::isfinite(delta),
                  "power utility: delta must be positive");
  detail::require(delta != 1.0, "power utility: delta must differ from 1");
  UtilitySpec u;
  u.kind_ = UtilityKind::kPower;
  u.delta_ = delta;
  return u;
}

UtilitySpec UtilitySpec::power_from_gamma(double gamma) {
  detail::require(gamma < 1.0, "power utility: gamma must be below 1");
  detail::require(gamma != 0.0, "power utility: gamma = 0 is log utility");
  return power(1.0 / (1.0 - gamma));
}

UtilitySpec UtilitySpec::cpt(const CptParams& p) {
  detail::require(p.b > 0.0 && p.a > p.b, "cpt utility: need a > b > 0");
  detail::require(p.gamma > 0.0 && p.gamma < 1.0,
                  "cpt utility: need 0 < gamma < 1");
  detail::require(p.delta_loss > 0.0 && p.delta_loss <= 1.0,
                  "cpt utility: need 0 < delta_loss <= 1");
  detail::require(p.xi > 0.0, "cpt utility: need xi > 0");
  UtilitySpec u;
  u.kind_ = UtilityKind::kCpt;
  u.cpt_ = p;
  return u;
}

UtilityDomain UtilitySpec::domain() const {
  switch (kind_) {
    case UtilityKind::kExponential:
      return UtilityDomain::kReals;
    case UtilityKind::kPower:
      return UtilityDomain::kPositiveReals;
    case UtilityKind::kCpt:
      return UtilityDomain::kNonnegativeReals;
  }
  return UtilityDomain::kReals;
}

double UtilitySpec::operator()(double x) const {
  switch (kind_) {
    case UtilityKind::kExponential:
      return -std::exp(-x / delta_);
    case UtilityKind::kPower: {
      if (!(x > 0.0)) return kNegInf;
      const double e = 1.0 - 1.0 / delta_;
      return std::pow(x, e) / e;
    }
    case UtilityKind::kCpt: {
      if (!(x >= 0.0)) return kNegInf;
      if (x <= cpt_.xi) return -cpt_.a * std::pow(cpt_.xi - x, cpt_.delta_loss);
      return cpt_.b * std::pow(x - cpt_.xi, cpt_.gamma);
    }
  }
  return kNegInf;
}

double UtilitySpec::of_relative(double relative_wealth) const {
  return (*this)(relative_wealth + capital_shift());
}

double UtilitySpec::capital_shift() const {
  return kind_ == UtilityKind::kCpt ? cpt_.xi : 0.0;
}

std::string UtilitySpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case UtilityKind::kExponential:
      os << "exponential(delta=" << delta_ << ")";
      break;
    case UtilityKind::kPower:
      os << "power(delta=" << delta_ << ")";
      break;
    case UtilityKind::kCpt:
      os << "cpt(a=" << cpt_.a << ", b=" << cpt_.b << ", gamma=" << cpt_.gamma
         << ", delta=" << cpt_.delta_loss << ", xi=" << cpt_.xi << ")";
      break;
  }
  return os.str();
}

bool in_domain(UtilityDomain domain, double x) {
  switch (domain) {
    case UtilityDomain::kReals:
      return std::isfinite(x);
    case UtilityDomain::kNonnegativeReals:
      return x >= 0.0;
    case UtilityDomain::kPositiveReals:
      return x > 0.0;
  }
  return false;
}

}  // namespace relnash
