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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zok/common.hpp"

namespace zok {

struct CgConfig {
  double tol = 1e-8;  ///< relative to max(1, ||b||)
  int max_iter = 0;   ///< 0 means "use the system size"
  bool warm_start = true;
};

template <typename Scalar>
struct CgResult {
  VectorX<Scalar> x;
  int iterations = 0;
  Scalar residual = 0;  ///< ||A x - b|| as tracked by the recurrence
  std::vector<Scalar> residual_history;
};

/// Conjugate gradients on a symmetric positive (semi)definite operator given
/// as a callable `apply(v) -> A v`. Stops when ||r|| <= tol * max(1, ||b||).
///
/// Throws IndefiniteOperator when a search direction has p'Ap < -eps ||p||^2.
template <typename Operator, typename Derived, typename Derived0>
CgResult<typename Derived::Scalar> cg_solve(
    const Operator& apply, const Eigen::MatrixBase<Derived>& b,
    const Eigen::MatrixBase<Derived0>& x0, const CgConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  using Vec = VectorX<Scalar>;
  if (!(cfg.tol > 0.0)) throw ArgumentError("cg_solve: tol must be > 0");
  if (x0.size() != b.size())
    throw ArgumentError("cg_solve: initial guess has wrong size");

  const Index n = b.size();
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : static_cast<int>(n);
  const Scalar eps = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  const Scalar threshold =
      Scalar(cfg.tol) * std::max(Scalar(1), b.norm());

  CgResult<Scalar> out;
  out.x = cfg.warm_start ? Vec(x0) : Vec(Vec::Zero(n));
  Vec r = b - apply(out.x);
  Scalar rr = r.squaredNorm();
  out.residual = std::sqrt(rr);
  out.residual_history.push_back(out.residual);
  if (out.residual <= threshold) return out;

  Vec p = r;
  Vec ap(n);
  for (int k = 0; k < max_iter; ++k) {
    ap = apply(p);
    const Scalar curvature = p.dot(ap);
    const Scalar pp = p.squaredNorm();
    if (curvature < -eps * pp * std::max(Scalar(1), ap.norm() / std::sqrt(pp)))
      throw IndefiniteOperator("cg_solve: negative curvature");
    if (curvature <= Scalar(0)) break;  // null direction; nothing to gain
    const Scalar step = rr / curvature;
    out.x += step * p;
    r -= step * ap;
    const Scalar rr_next = r.squaredNorm();
    out.iterations = k + 1;
    out.residual = std::sqrt(rr_next);
    out.residual_history.push_back(out.residual);
    if (out.residual <= threshold) break;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return out;
}

namespace detail {

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols())
    throw ArgumentError("expected a square matrix");
  if (m.size() == 0) return;
  const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() >
      Scalar(1e-12) * scale)
    throw ArgumentError("expected a symmetric matrix");
}

}  // namespace detail

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending.
template <typename Derived>
VectorX<typename Derived::Scalar> jacobi_eigenvalues(
    const Eigen::MatrixBase<Derived>& matrix, typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(matrix);
  MatrixX<Scalar> a = matrix;
  const Index n = a.rows();
  const Scalar frob = std::max(a.norm(), std::numeric_limits<Scalar>::min());
  const Scalar stop = std::min(tol, Scalar(1e-14)) * frob;
  for (int sweep = 0; sweep < 100; ++sweep) {
    Scalar off = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(Scalar(2) * off) <= stop) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        const Scalar tau = (a(q, q) - a(p, p)) / (Scalar(2) * a(p, q));
        const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;
        // A <- J' A J with J the (p, q) rotation.
        for (Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  VectorX<Scalar> values = a.diagonal();
  std::sort(values.data(), values.data() + values.size());
  return values;
}

namespace detail {

template <typename Scalar, typename Apply>
Scalar power_iteration(const Apply& apply, Index n, Scalar tol) {
  VectorX<Scalar> v = VectorX<Scalar>::Ones(n) / std::sqrt(Scalar(n));
  // Break symmetry so the start vector is not orthogonal to the top
  // eigenvector for structured inputs.
  for (Index i = 0; i < n; ++i) v[i] += Scalar(1e-3) * Scalar(i % 7) / Scalar(n);
  v.normalize();
  Scalar estimate = 0;
  for (int it = 0; it < 20000; ++it) {
    VectorX<Scalar> w = apply(v);
    const Scalar next = v.dot(w);
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    if (it > 0 && std::abs(next - estimate) <= tol * std::max(Scalar(1), std::abs(next)) * Scalar(1e-2))
      return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace detail

/// Smallest eigenvalue of a symmetric matrix. Cyclic Jacobi up to 500 rows;
/// beyond that, power iteration on (lambda_max I - M).
template <typename Derived>
typename Derived::Scalar smallest_eigenvalue(
    const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  const Index n = m.rows();
  if (n == 0) throw ArgumentError("smallest_eigenvalue: empty matrix");
  detail::require_symmetric(m);
  if (n <= 500) return jacobi_eigenvalues(m, tol)[0];

  const MatrixX<Scalar> a = m;
  // Gershgorin bound keeps the shifted operator positive semidefinite.
  const Scalar bound = a.cwiseAbs().rowwise().sum().maxCoeff();
  const auto shifted = [&](const VectorX<Scalar>& v) -> VectorX<Scalar> {
    return bound * v - a * v;
  };
  return bound - detail::power_iteration<Scalar>(shifted, n, tol);
}

}  // namespace zok
