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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zok/config.hpp"
#include "zok/data.hpp"
#include "zok/json.hpp"
#include "zok/kernel.hpp"
#include "zok/model.hpp"
#include "zok/solver.hpp"

namespace zok {

struct GridSpec {
  std::vector<double> c_values;
  std::vector<double> kernel_param_values;
  std::vector<double> sigma_admm_values;

  /// {2^lo, ..., 2^hi} for C and the kernel parameter.
  static GridSpec log2_range(int lo, int hi,
                             std::vector<double> sigma_admm = {1.0});
  void validate() const;
};

enum class ScalingMode { fit_on_train, whole_dataset };

struct EvalOptions {
  ScalingMode scaling = ScalingMode::fit_on_train;
  int jobs = 1;
  bool include_gram_time = false;
  const GramCache* cache = nullptr;
};

struct FoldResult {
  int fold = 0;
  bool skipped = false;  ///< training split had a single class
  Metrics metrics;
  Certificate certificate;
};

struct CvParams {
  double C = 0.0;
  double kernel_param = 0.0;
  double sigma_admm = 0.0;
};

struct CvReport {
  std::string dataset;
  KernelSpec spec;
  SolverConfig config;
  std::vector<FoldResult> per_fold;  ///< one entry per fold, skipped included
  double mean_acc = 0.0;
  double mean_nsv = 0.0;
  double mean_cpu = 0.0;
  CvParams best_params;
  std::optional<double> noise_rate;

  /// Recomputes the means over non-skipped folds.
  void aggregate();
};

CvReport cross_validate(const Dataset& d, const KernelSpec& spec,
                        const SolverConfig& cfg, const FoldPlan& plan,
                        const EvalOptions& options = {});

struct GridResult {
  CvReport best;
  std::vector<CvReport> all;
};

/// Orders reports by (higher mean_acc, lower mean_nsv, lower C).
bool better_report(const CvReport& a, const CvReport& b);

/// Every (kernel parameter, C, sigma_admm) cell of `grid`, cross-validated on
/// `plan`. The linear family ignores the kernel parameter list.
GridResult grid_search(const Dataset& d, const KernelSpec& family,
                       const GridSpec& grid, const SolverConfig& cfg,
                       const FoldPlan& plan, const EvalOptions& options = {});

struct Comparison {
  GridResult linear;
  GridResult gaussian;
};

Comparison compare_linear_nonlinear(const Dataset& d, const GridSpec& grid,
                                    const SolverConfig& cfg,
                                    const FoldPlan& plan,
                                    const EvalOptions& options = {});

struct NoiseRun {
  double rate = 0.0;
  GridResult result;
};

struct NoiseOptions {
  std::uint64_t fold_seed = 0;
  std::uint64_t noise_seed = 0;
  int folds = 10;
  /// Re-run the grid per rate; otherwise reuse the clean-data optimum.
  bool retune = true;
};

/// Flips labels on the full set at each rate, then cross-validates.
std::vector<NoiseRun> noise_experiment(const Dataset& d,
                                       const std::vector<double>& rates,
                                       const KernelSpec& family,
                                       const GridSpec& grid,
                                       const SolverConfig& cfg,
                                       const NoiseOptions& noise,
                                       const EvalOptions& options = {});

Json to_json(const CvReport& report);
Json to_json(const GridResult& result);

/// One row per fold. Timing is left out so reruns are byte-identical.
void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const CvReport& report);

}  // namespace zok
