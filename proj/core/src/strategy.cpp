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

#include "relnash/strategy.hpp"

#include "relnash/errors.hpp"

namespace relnash {

StrategyProcess::StrategyProcess(std::size_t paths, std::size_t steps,
                                 std::size_t assets, Quantity quantity,
                                 double fill)
    : paths_(paths),
      steps_(steps),
      assets_(assets),
      quantity_(quantity),
      values_(paths * steps * assets, fill) {
  detail::require(paths > 0 && steps > 0 && assets > 0,
                  "StrategyProcess: all extents must be positive");
}

StrategyProcess StrategyProcess::constant(std::span<const double> per_asset,
                                          Quantity quantity) {
  StrategyProcess s(1, 1, per_asset.size(), quantity);
  for (std::size_t k = 0; k < per_asset.size(); ++k) s.values_[k] = per_asset[k];
  return s;
}

bool StrategyProcess::same_shape(const StrategyProcess& other) const {
  return paths_ == other.paths_ && steps_ == other.steps_ &&
         assets_ == other.assets_ && quantity_ == other.quantity_;
}

}  // namespace relnash
