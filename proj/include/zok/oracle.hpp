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

#include "zok/common.hpp"
#include "zok/data.hpp"
#include "zok/kernel.hpp"

/// Reference computations the test suite checks the solver against. They
/// share no code path with the ADMM iteration.
namespace zok::oracle {

struct ObjectiveValue {
  double quadratic = 0.0;  ///< 0.5 alpha' K~ alpha
  Index loss_count = 0;    ///< ||u_+||_0
  double total = 0.0;      ///< quadratic + C * loss_count
};

/// Objective with u = e + K~ alpha. Entries of u above `loss_tol` count as
/// violations (0 means strictly positive).
ObjectiveValue objective(const Vector& alpha, const GramMatrix& signed_gram,
                         double C, double loss_tol = 0.0);

/// Objective of an explicit (alpha, u) pair; the loss is read off `u`.
ObjectiveValue objective(const Vector& alpha, const Vector& u,
                         const GramMatrix& signed_gram, double C);

/// alpha supported on `support` with u = e + K~ alpha vanishing there:
/// alpha_S = -(K~_SS)^+ e.
Vector restricted_solution(const GramMatrix& signed_gram,
                           const IndexSet& support);

struct GlobalOptimum {
  Vector alpha;
  ObjectiveValue value;
};

/// Exact global minimiser for m <= m_cap by enumerating every candidate
/// support set S. For a fixed violator pattern the optimum has alpha
/// supported on its active margin set, so the 2^m restricted solutions
/// contain the global minimiser; each is scored with its recounted loss.
GlobalOptimum global_bruteforce(const GramMatrix& signed_gram, double C,
                                Index m_cap = 8);

/// Linear-kernel identity: lhs = 0.5 alpha' K~ alpha and
/// rhs = 0.5 ||w||^2 + 0.5 b^2 with (w, b) = -sum alpha_i y_i x~_i.
std::pair<double, double> degeneracy_check(const Dataset& d,
                                           const KernelSpec& spec,
                                           const Vector& alpha);

/// argmin_u 0.5 (u - z)^2 + gamma C 1[u > 0] over the grid
/// {z_lo + k step}, which always includes 0 and z.
double prox_grid_argmin(double z, double gamma, double C, double step = 1e-4);

/// 1 - sum |sign(f_j) - y_j| / (2 m_t), with sign(0) = +1.
double accuracy_formula(const Vector& decision, const Vector& labels);

}  // namespace zok::oracle
