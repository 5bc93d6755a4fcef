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

#ifndef RELNASH_ERRORS_HPP_
#define RELNASH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace relnash {

// Bad parameters or shapes supplied by the caller.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine failed to converge or hit a singular system.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual);

  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// The request exceeds a hard memory guard (e.g. exhaustive trees).
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace relnash

#endif  // RELNASH_ERRORS_HPP_
