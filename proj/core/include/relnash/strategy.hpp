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

#ifndef RELNASH_STRATEGY_HPP_
#define RELNASH_STRATEGY_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace relnash {

// Whether values are numbers of shares or currency amounts held per asset.
enum class Quantity { kShares, kAmounts };

// A trading strategy sampled on (path, step, asset). Step m is the position
// held over [t_m, t_{m+1}). A dimension of extent 1 broadcasts: a strategy
// with one path and one step is deterministic and constant in time.
class StrategyProcess {
 public:
  StrategyProcess() = default;
  StrategyProcess(std::size_t paths, std::size_t steps, std::size_t assets,
                  Quantity quantity, double fill = 0.0);

  static StrategyProcess constant(std::span<const double> per_asset,
                                  Quantity quantity);

  std::size_t paths() const { return paths_; }
  std::size_t steps() const { return steps_; }
  std::size_t assets() const { return assets_; }
  Quantity quantity() const { return quantity_; }
  bool is_constant() const { return paths_ == 1 && steps_ == 1; }
  bool same_shape(const StrategyProcess& other) const;

  double& operator()(std::size_t path, std::size_t step, std::size_t asset) {
    return values_[index(path, step, asset)];
  }
  double operator()(std::size_t path, std::size_t step, std::size_t asset) const {
    return values_[index(path, step, asset)];
  }
  // Broadcasting read: indices along extent-1 dimensions are ignored.
  double at(std::size_t path, std::size_t step, std::size_t asset) const {
    return values_[index(paths_ == 1 ? 0 : path, steps_ == 1 ? 0 : step, asset)];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t index(std::size_t path, std::size_t step, std::size_t asset) const {
    return (path * steps_ + step) * assets_ + asset;
  }

  std::size_t paths_ = 0;
  std::size_t steps_ = 0;
  std::size_t assets_ = 0;
  Quantity quantity_ = Quantity::kShares;
  std::vector<double> values_;
};

}  // namespace relnash

#endif  // RELNASH_STRATEGY_HPP_
