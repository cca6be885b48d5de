// Copyright 2026 The mres-lattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <istream>
#include <string>

#include "mres/core.hpp"

namespace mres {

// Plain-text `key = value` planner configuration. One pair per line, `#`
// starts a comment, blank lines are ignored. Keys not listed in
// PlannerConfig are rejected with the offending line number. Missing keys
// keep their defaults. The parsed config is validated before returning.
PlannerConfig parse_config(std::istream& in);
PlannerConfig load_config(const std::string& path);

/// Canonical text form, readable by parse_config.
std::string format_config(const PlannerConfig& cfg);

}  // namespace mres
