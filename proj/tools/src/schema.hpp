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

#ifndef RELNASH_TOOLS_SCHEMA_HPP_
#define RELNASH_TOOLS_SCHEMA_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace relnash::cli {

// Declared JSON schema of a report kind: "equilibrium", "simulation",
// "verification" or "meanfield", self-contained. Throws std::out_of_range
// for other names.
nlohmann::json report_schema(const std::string& kind);
std::vector<std::string> report_kinds();

// Checks `doc` against the JSON Schema subset used by the report schemas:
// type, enum, required, properties, additionalProperties, items, minimum,
// maximum. Returns one message per violation, prefixed with its pointer.
std::vector<std::string> validate_against(const nlohmann::json& doc,
                                          const nlohmann::json& schema);

}  // namespace relnash::cli

#endif  // RELNASH_TOOLS_SCHEMA_HPP_
