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

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relnash/numerics.hpp"

namespace relnash {
namespace {

TEST(NormalTest, CdfAgainstErfc) {
  for (double x = -6.0; x <= 6.0; x += 0.37) EXPECT_NEAR(normal_cdf(x), oracle::phi_cdf(x), 1e-15);
  EXPECT_NEAR(normal_cdf(-0.25), 0.40129367431707624, 1e-15);
}

TEST(NormalTest, QuantileInvertsCdf) {
  for (double p : {1e-12, 1e-5, 0.01, 0.3, 0.5, 0.77, 0.999999})
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13 * std::max(1.0, p / 1e-3));
}

TEST(SumTest, PairwiseMatchesExactSmallSums) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(EstimateTest, MeanAndStandardError) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = sample_estimate(v);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt((1.25 * 4 / 3.0) / 4.0), 1e-15);
  EXPECT_DOUBLE_EQ(weighted_mean(v, std::vector<double>{0.5, 0.5, 0.0, 0.0}), 1.5);
}

TEST(ParallelTest, CoversRangeOnceAndPropagatesErrors) {
  std::vector<int> hits(1001, 0);
  parallel_for(hits.size(), 4, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) ++hits[j];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t b, std::size_t) {
                              if (b > 0) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(StreamTest, DistinctAndReproducible) {
  auto a = make_stream(1, 2, 0);
  auto b = make_stream(1, 2, 0);
  auto c = make_stream(1, 3, 0);
  auto d = make_stream(1, 2, 1);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

}  // namespace
}  // namespace relnash
