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

#include "relnash/errors.hpp"

namespace relnash {

SolverError::SolverError(const std::string& what, double last_residual)
    : std::runtime_error(what + " (last residual " +
                         std::to_string(last_residual) + ")"),
      last_residual_(last_residual) {}

}  // namespace relnash
