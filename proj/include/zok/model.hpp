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

#include <cstdint>
#include <string>

#include "zok/config.hpp"
#include "zok/data.hpp"
#include "zok/kernel.hpp"

namespace zok {

/// A trained classifier. Only support vectors are kept: `alpha`,
/// `sv_labels` and the rows of `sv_inputs` are aligned with `sv_indices`.
struct TrainedModel {
  Vector alpha;
  IndexSet sv_indices;  ///< rows of the training set
  Matrix sv_inputs;     ///< raw (unaugmented) coordinates, already scaled
  Vector sv_labels;
  KernelSpec spec;
  SolverConfig config_snapshot;
  /// Scaling fitted on the training data, applied to prediction inputs.
  std::optional<ScalingMap> scaling;

  Index sv_count() const { return static_cast<Index>(sv_indices.size()); }
  Index dimension() const { return sv_inputs.cols(); }

  /// alpha_i in [-sqrt(2 C / gamma) - slack, slack) for every stored SV.
  bool sign_pattern_holds(double slack) const;
};

struct Metrics {
  double acc = 0.0;
  Index nsv = 0;
  double cpu_seconds = 0.0;
};

/// T* = {i : u_i - gamma alpha_i in (0, sqrt(2 gamma C)]}.
IndexSet extract_svs(const Vector& alpha, const Vector& u, double gamma,
                     double C);

/// Keeps the rows of `train` listed in `svs`. `train` must already be in
/// the coordinates the kernel sees (i.e. scaled).
TrainedModel build_model(const Dataset& train, const Vector& alpha,
                         const IndexSet& svs, const KernelSpec& spec,
                         const SolverConfig& cfg);

/// f(x~) = -sum_{i in T*} alpha_i y_i k(x~_i, x~). `x` is in model
/// coordinates (the stored scaling is not applied here).
double decision_value(const TrainedModel& model, const Vector& x);
Vector decision_values(const TrainedModel& model, const Matrix& x);

/// sign(f) with sign(0) = +1.
double predict(const TrainedModel& model, const Vector& x);
Vector predict(const TrainedModel& model, const Matrix& x);

/// Fraction of correctly labelled rows of `test` (model coordinates).
double accuracy(const TrainedModel& model, const Dataset& test);

/// Versioned binary model file; layout documented in README.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace zok
