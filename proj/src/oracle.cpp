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

#include "zok/oracle.hpp"

#include <cmath>
#include <limits>

namespace zok::oracle {

ObjectiveValue objective(const Vector& alpha, const GramMatrix& signed_gram,
                         double C, double loss_tol) {
  if (!signed_gram.signed_form || signed_gram.size() != alpha.size())
    throw ArgumentError("objective: expected a signed Gram of matching size");
  ObjectiveValue v;
  const Vector k_alpha = signed_gram.entries * alpha;
  double quad = 0.0;
  for (Index i = 0; i < alpha.size(); ++i) quad += alpha[i] * k_alpha[i];
  v.quadratic = 0.5 * quad;
  for (Index i = 0; i < alpha.size(); ++i)
    if (1.0 + k_alpha[i] > loss_tol) ++v.loss_count;
  v.total = v.quadratic + C * static_cast<double>(v.loss_count);
  return v;
}

ObjectiveValue objective(const Vector& alpha, const Vector& u,
                         const GramMatrix& signed_gram, double C) {
  ObjectiveValue v = objective(alpha, signed_gram, C);
  v.loss_count = (u.array() > 0.0).count();
  v.total = v.quadratic + C * static_cast<double>(v.loss_count);
  return v;
}

Vector restricted_solution(const GramMatrix& signed_gram,
                           const IndexSet& support) {
  const Index m = signed_gram.size();
  Vector alpha = Vector::Zero(m);
  if (support.empty()) return alpha;
  const Matrix block = signed_gram.entries(support, support);
  const Vector ones = Vector::Ones(static_cast<Index>(support.size()));
  alpha(support) = -block.completeOrthogonalDecomposition().solve(ones);
  return alpha;
}

GlobalOptimum global_bruteforce(const GramMatrix& signed_gram, double C,
                                Index m_cap) {
  const Index m = signed_gram.size();
  if (m > m_cap)
    throw ArgumentError("global_bruteforce: m = " + std::to_string(m) +
                        " exceeds cap " + std::to_string(m_cap));
  constexpr double kMarginTol = 1e-9;
  GlobalOptimum best;
  best.value.total = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    IndexSet support;
    for (Index i = 0; i < m; ++i)
      if (mask & (1UL << i)) support.push_back(i);
    const Vector alpha = restricted_solution(signed_gram, support);
    const Vector u = (signed_gram.entries * alpha).array() + 1.0;
    // A singular block may leave the margin equations unsatisfied.
    bool consistent = true;
    for (const Index i : support)
      if (std::abs(u[i]) > 1e-7) consistent = false;
    if (!consistent) continue;
    const ObjectiveValue value =
        objective(alpha, signed_gram, C, kMarginTol);
    if (value.total < best.value.total) {
      best.alpha = alpha;
      best.value = value;
    }
  }
  return best;
}

std::pair<double, double> degeneracy_check(const Dataset& d,
                                           const KernelSpec& spec,
                                           const Vector& alpha) {
  if (spec.family != KernelFamily::linear || !spec.augment_bias)
    throw ArgumentError("degeneracy_check needs a bias-augmented linear kernel");
  if (alpha.size() != d.rows())
    throw ArgumentError("degeneracy_check: alpha length mismatch");

  const GramMatrix signed_gram = sign_gram(gram_matrix(d, spec), d.labels);
  double lhs = 0.0;
  for (Index i = 0; i < alpha.size(); ++i)
    for (Index j = 0; j < alpha.size(); ++j)
      lhs += alpha[i] * signed_gram.entries(i, j) * alpha[j];
  lhs *= 0.5;

  Vector w = Vector::Zero(d.cols());
  double b = 0.0;
  for (Index i = 0; i < d.rows(); ++i) {
    const double coef = -alpha[i] * d.labels[i];
    w += coef * d.features.row(i).transpose();
    b += coef;
  }
  const double rhs = 0.5 * w.squaredNorm() + 0.5 * b * b;
  return {lhs, rhs};
}

double prox_grid_argmin(double z, double gamma, double C, double step) {
  const double penalty = gamma * C;
  auto cost = [&](double u) {
    return 0.5 * (u - z) * (u - z) + (u > 0.0 ? penalty : 0.0);
  };
  // The grid spans both quadratic pieces (split at 0) with a small margin.
  const double lo = std::min(0.0, z) - 0.1;
  const double hi = std::max(0.0, z) + 0.1;
  double best_u = 0.0;
  double best = cost(0.0);
  const auto steps = static_cast<long>(std::ceil((hi - lo) / step));
  for (long k = 0; k <= steps; ++k) {
    const double u = lo + static_cast<double>(k) * step;
    const double c = cost(u);
    if (c < best) {
      best = c;
      best_u = u;
    }
  }
  return best_u;
}

double accuracy_formula(const Vector& decision, const Vector& labels) {
  if (decision.size() != labels.size() || labels.size() == 0)
    throw ArgumentError("accuracy_formula: size mismatch or empty input");
  double sum = 0.0;
  for (Index j = 0; j < labels.size(); ++j) {
    const double s = decision[j] >= 0.0 ? 1.0 : -1.0;
    sum += std::abs(s - labels[j]);
  }
  return 1.0 - sum / (2.0 * static_cast<double>(labels.size()));
}

}  // namespace zok::oracle
