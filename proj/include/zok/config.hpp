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

#include <optional>

#include "zok/linalg.hpp"

namespace zok {

/// How the alpha subproblem is solved.
///  - reduced: (K~_TT + I / sigma) alpha_T = v_T, alpha = 0 off T. Solves the
///    full system exactly and is well conditioned.
///  - full: (K~ + sigma K~_T' K~_T) alpha = sigma K~_T' v_T, matrix-free.
enum class AlphaSystem { reduced, full };

/// ADMM hyperparameters. The proximal step gamma is always 1 / sigma_admm.
struct SolverConfig {
  double C = 1.0;           ///< loss penalty
  double sigma_admm = 1.0;  ///< augmented-Lagrangian penalty
  double eta = 1.0;         ///< dual step
  int max_iter = 100;       ///< K
  double tol = 1e-3;
  double alpha0_scale = 0.01;
  /// Diagonal added to the signed Gram when the alpha system is indefinite.
  /// Unset means 1e-8 * trace / m.
  std::optional<double> ridge_jitter;
  /// Compute lambda_min of the signed Gram for the certificate. O(m^3).
  bool report_gamma_bound = false;
  AlphaSystem alpha_system = AlphaSystem::reduced;
  CgConfig cg;

  double gamma() const { return 1.0 / sigma_admm; }
  void validate() const;
};

}  // namespace zok
