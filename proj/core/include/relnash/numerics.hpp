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

#ifndef RELNASH_NUMERICS_HPP_
#define RELNASH_NUMERICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace relnash {

// Mean with standard error. Exhaustive (exact) evaluations carry std_error 0.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

// Pairwise (tree) summation in a fixed order, independent of thread count.
double pairwise_sum(std::span<const double> values);

// Sample mean and standard error of the mean (n - 1 denominator).
Estimate sample_estimate(std::span<const double> values);

// Exact weighted mean; std_error is zero.
double weighted_mean(std::span<const double> values,
                     std::span<const double> weights);

// Splits [0, count) into contiguous chunks and runs body(begin, end) on up
// to `threads` workers (0 means hardware concurrency). Output written by
// index is independent of the worker count.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

// Independent RNG stream for (seed, stream index, salt). Each path owns one
// stream so that it can be regenerated in isolation.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t salt = 0);

}  // namespace relnash

#endif  // RELNASH_NUMERICS_HPP_
