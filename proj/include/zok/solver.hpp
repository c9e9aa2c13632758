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

#include "zok/config.hpp"
#include "zok/kernel.hpp"
#include "zok/model.hpp"

namespace zok {

/// Iterate triple plus the working set that produced it.
struct SolverState {
  Vector alpha;
  Vector u;
  Vector lambda;
  IndexSet working_set;
  int iteration = 0;
};

struct Certificate {
  double theta1 = 0.0;  ///< ||u - e - K~ alpha|| / sqrt(m)
  double theta2 = 0.0;  ///< ||u - Prox(u - gamma alpha)|| / (1 + ||u||)
  bool converged = false;
  int iterations_used = 0;
  std::optional<double> lambda_min;  ///< smallest eigenvalue of K~
  double gamma = 0.0;
  double jitter = 0.0;  ///< ridge added to K~ during the run, 0 if none
  int cg_iterations = 0;
};

struct WorkingSet {
  IndexSet indices;  ///< T_k
  Vector z;          ///< e + K~ alpha - lambda / sigma
};

/// T_k = {i : z_i in (0, sqrt(2 C / sigma)]}.
WorkingSet working_set(const Vector& alpha, const Vector& lambda,
                       const GramMatrix& signed_gram, const SolverConfig& cfg);

/// u zeroed on T_k, equal to z elsewhere.
Vector update_u(const Vector& z, const IndexSet& working_set);

struct AlphaStep {
  Vector alpha;
  int cg_iterations = 0;
  double jitter = 0.0;
};

/// Solves (K~ + sigma K~_T' K~_T) alpha = sigma K~_T' v_T with
/// v = u_next - e + lambda / sigma, by CG warm-started at state.alpha, using
/// the route selected by cfg.alpha_system. An empty working set returns
/// alpha = 0.
AlphaStep update_alpha(const SolverState& state, const Vector& u_next,
                       const GramMatrix& signed_gram, const SolverConfig& cfg);

/// lambda_T += eta sigma (u - e - K~ alpha)_T; lambda is 0 off T.
Vector update_lambda(const SolverState& state, const Vector& u_next,
                     const Vector& alpha_next, const GramMatrix& signed_gram,
                     const SolverConfig& cfg);

struct Residuals {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double max() const { return theta1 > theta2 ? theta1 : theta2; }
};

Residuals residuals(const Vector& alpha, const Vector& u,
                    const GramMatrix& signed_gram, double gamma, double C);
Residuals residuals(const Vector& alpha, const Vector& u,
                    const GramMatrix& signed_gram, const SolverConfig& cfg);

/// Both P-stationarity conditions within tol, measured as theta1 and theta2.
bool check_pstationary(const Vector& alpha, const Vector& u,
                       const GramMatrix& signed_gram, double gamma, double C,
                       double tol);

struct TrainResult {
  TrainedModel model;
  Certificate certificate;
  SolverState state;  ///< final (alpha, u, lambda)
};

/// Runs the working-set ADMM until max(theta1, theta2) < tol or max_iter
/// updates. `gram` is the unsigned kernel matrix of `d` (computed when not
/// supplied). `d` must already be scaled.
TrainResult train(const Dataset& d, const KernelSpec& spec,
                  const SolverConfig& cfg,
                  const GramMatrix* gram = nullptr);

/// Same loop on a prebuilt signed Gram matrix; returns the final state and
/// certificate only.
std::pair<SolverState, Certificate> run_admm(const GramMatrix& signed_gram,
                                             const SolverConfig& cfg);

}  // namespace zok
