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

#include "zok/solver.hpp"

#include <cassert>
#include <cmath>

#include "zok/prox.hpp"

namespace zok {

void SolverConfig::validate() const {
  if (!(C > 0.0)) throw ArgumentError("C must be > 0");
  if (!(sigma_admm > 0.0)) throw ArgumentError("sigma_admm must be > 0");
  if (!(eta > 0.0)) throw ArgumentError("eta must be > 0");
  if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
  if (!(tol > 0.0)) throw ArgumentError("tol must be > 0");
  if (!(alpha0_scale > 0.0)) throw ArgumentError("alpha0_scale must be > 0");
  if (ridge_jitter && !(*ridge_jitter > 0.0))
    throw ArgumentError("ridge_jitter must be > 0");
  if (!(cg.tol > 0.0)) throw ArgumentError("cg tol must be > 0");
}

namespace {

void require_signed(const GramMatrix& g, Index m) {
  if (!g.signed_form) throw ArgumentError("expected a signed Gram matrix");
  if (g.size() != m) throw ArgumentError("Gram size does not match iterate");
}

}  // namespace

WorkingSet working_set(const Vector& alpha, const Vector& lambda,
                       const GramMatrix& signed_gram,
                       const SolverConfig& cfg) {
  require_signed(signed_gram, alpha.size());
  WorkingSet ws;
  ws.z = (signed_gram.entries * alpha).array() + 1.0;
  ws.z -= lambda / cfg.sigma_admm;
  ws.indices = zero_set(ws.z, ProxParams(cfg.gamma(), cfg.C));
  return ws;
}

Vector update_u(const Vector& z, const IndexSet& working_set) {
  Vector u = z;
  u(working_set).setZero();
  return u;
}

AlphaStep update_alpha(const SolverState& state, const Vector& u_next,
                       const GramMatrix& signed_gram,
                       const SolverConfig& cfg) {
  const Index m = state.alpha.size();
  require_signed(signed_gram, m);
  const IndexSet& T = state.working_set;
  AlphaStep step;
  if (T.empty()) {
    step.alpha = Vector::Zero(m);
    return step;
  }

  const Matrix& K = signed_gram.entries;
  const Vector v_T =
      (u_next(T).array() - 1.0).matrix() + state.lambda(T) / cfg.sigma_admm;
  const double default_ridge = 1e-8 * K.trace() / static_cast<double>(m);

  if (cfg.alpha_system == AlphaSystem::reduced) {
    const Matrix K_TT = K(T, T);
    const double shift = 1.0 / cfg.sigma_admm;
    const Vector start = state.alpha(T);
    auto solve = [&](double ridge) {
      const auto apply = [&](const Vector& x) -> Vector {
        return K_TT * x + (shift + ridge) * x;
      };
      return cg_solve(apply, v_T, start, cfg.cg);
    };
    step.alpha = Vector::Zero(m);
    try {
      auto result = solve(0.0);
      step.alpha(T) = result.x;
      step.cg_iterations = result.iterations;
    } catch (const IndefiniteOperator&) {
      step.jitter = cfg.ridge_jitter.value_or(default_ridge);
      try {
        auto result = solve(step.jitter);
        step.alpha(T) = result.x;
        step.cg_iterations = result.iterations;
      } catch (const IndefiniteOperator&) {
        throw SolverError("alpha system indefinite even after ridge jitter");
      }
    }
    return step;
  }

  const Matrix K_T = K(T, Eigen::all);
  const Vector rhs = cfg.sigma_admm * (K_T.transpose() * v_T);
  auto solve = [&](double ridge) {
    const auto apply = [&](const Vector& x) -> Vector {
      Vector out = K * x;
      out.noalias() += cfg.sigma_admm * (K_T.transpose() * (K_T * x));
      if (ridge > 0.0) out += ridge * x;
      return out;
    };
    return cg_solve(apply, rhs, state.alpha, cfg.cg);
  };
  try {
    auto result = solve(0.0);
    step.alpha = std::move(result.x);
    step.cg_iterations = result.iterations;
  } catch (const IndefiniteOperator&) {
    step.jitter = cfg.ridge_jitter.value_or(default_ridge);
    try {
      auto result = solve(step.jitter);
      step.alpha = std::move(result.x);
      step.cg_iterations = result.iterations;
    } catch (const IndefiniteOperator&) {
      throw SolverError("alpha system indefinite even after ridge jitter");
    }
  }
  return step;
}

Vector update_lambda(const SolverState& state, const Vector& u_next,
                     const Vector& alpha_next, const GramMatrix& signed_gram,
                     const SolverConfig& cfg) {
  const Index m = alpha_next.size();
  require_signed(signed_gram, m);
  const Vector residual =
      (u_next.array() - 1.0).matrix() - signed_gram.entries * alpha_next;
  Vector lambda = Vector::Zero(m);
  const IndexSet& T = state.working_set;
  lambda(T) = state.lambda(T) + cfg.eta * cfg.sigma_admm * residual(T);
  return lambda;
}

Residuals residuals(const Vector& alpha, const Vector& u,
                    const GramMatrix& signed_gram, double gamma, double C) {
  require_signed(signed_gram, alpha.size());
  const double m = static_cast<double>(alpha.size());
  Residuals r;
  const Vector feas =
      (u.array() - 1.0).matrix() - signed_gram.entries * alpha;
  r.theta1 = feas.norm() / std::sqrt(m);
  const Vector shifted = u - gamma * alpha;
  r.theta2 = (u - prox_l01_vector(shifted, ProxParams(gamma, C))).norm() /
             (1.0 + u.norm());
  return r;
}

Residuals residuals(const Vector& alpha, const Vector& u,
                    const GramMatrix& signed_gram, const SolverConfig& cfg) {
  return residuals(alpha, u, signed_gram, cfg.gamma(), cfg.C);
}

bool check_pstationary(const Vector& alpha, const Vector& u,
                       const GramMatrix& signed_gram, double gamma, double C,
                       double tol) {
  return residuals(alpha, u, signed_gram, gamma, C).max() < tol;
}

std::pair<SolverState, Certificate> run_admm(const GramMatrix& signed_gram,
                                             const SolverConfig& cfg) {
  cfg.validate();
  const Index m = signed_gram.size();
  require_signed(signed_gram, m);

  SolverState state;
  state.alpha = Vector::Constant(m, cfg.alpha0_scale);
  state.lambda = Vector::Zero(m);
  state.u = (signed_gram.entries * state.alpha).array() + 1.0;

  Certificate cert;
  cert.gamma = cfg.gamma();
  while (true) {
    const auto r = residuals(state.alpha, state.u, signed_gram, cfg);
    cert.theta1 = r.theta1;
    cert.theta2 = r.theta2;
    if (r.max() < cfg.tol) {
      cert.converged = true;
      break;
    }
    if (state.iteration >= cfg.max_iter) break;

    auto ws = working_set(state.alpha, state.lambda, signed_gram, cfg);
    state.working_set = std::move(ws.indices);
    Vector u_next = update_u(ws.z, state.working_set);
    AlphaStep step = update_alpha(state, u_next, signed_gram, cfg);
    Vector lambda_next =
        update_lambda(state, u_next, step.alpha, signed_gram, cfg);

    cert.cg_iterations += step.cg_iterations;
    cert.jitter = std::max(cert.jitter, step.jitter);
    state.alpha = std::move(step.alpha);
    state.u = std::move(u_next);
    state.lambda = std::move(lambda_next);
    ++state.iteration;

#ifndef NDEBUG
    for (const Index i : state.working_set) assert(state.u[i] == 0.0);
    {
      std::vector<bool> in_t(static_cast<std::size_t>(m), false);
      for (const Index i : state.working_set) in_t[static_cast<std::size_t>(i)] = true;
      for (Index i = 0; i < m; ++i)
        assert(in_t[static_cast<std::size_t>(i)] || state.lambda[i] == 0.0);
    }
#endif
  }
  cert.iterations_used = state.iteration;
  if (cfg.report_gamma_bound)
    cert.lambda_min = smallest_eigenvalue(signed_gram.entries, 1e-10);
  return {std::move(state), cert};
}

TrainResult train(const Dataset& d, const KernelSpec& spec,
                  const SolverConfig& cfg, const GramMatrix* gram) {
  d.require_trainable();
  cfg.validate();
  GramMatrix computed;
  if (gram == nullptr) {
    computed = gram_matrix(d, spec);
    gram = &computed;
  } else if (gram->size() != d.rows() || gram->signed_form) {
    throw ArgumentError("train: supplied Gram matrix does not fit the data");
  }
  const GramMatrix signed_gram = sign_gram(*gram, d.labels);
  auto [state, cert] = run_admm(signed_gram, cfg);

  const IndexSet svs =
      extract_svs(state.alpha, state.u, cfg.gamma(), cfg.C);
  TrainResult out{build_model(d, state.alpha, svs, spec, cfg), cert,
                  std::move(state)};
  return out;
}

}  // namespace zok
