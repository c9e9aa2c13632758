// Copyright 2026 The zok Authors.
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

#include <json.hpp>

#include "zok/config.hpp"
#include "zok/data.hpp"
#include "zok/kernel.hpp"
#include "zok/solver.hpp"

namespace zok {

using Json = nlohmann::json;

Json to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const Json& j);

Json to_json(const SolverConfig& cfg);
/// Fields absent from `j` keep their value in `base`.
SolverConfig solver_config_from_json(const Json& j, SolverConfig base = {});

Json to_json(const ScalingMap& s);
ScalingMap scaling_from_json(const Json& j);

/// {theta1, theta2, converged, iterations_used, lambda_min, gamma, ...}
Json to_json(const Certificate& c);

}  // namespace zok
