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

#include <cmath>

#include "zok/common.hpp"

namespace zok {

/// Parameters of the proximal map of u -> gamma * C * ||u_+||_0.
template <typename Scalar>
struct ProxParamsT {
  Scalar gamma;
  Scalar C;
  Scalar threshold;  ///< sqrt(2 gamma C)

  ProxParamsT(Scalar gamma_, Scalar c_)
      : gamma(gamma_), C(c_), threshold(std::sqrt(Scalar(2) * gamma_ * c_)) {
    if (!(gamma_ > 0) || !(c_ > 0))
      throw ArgumentError("prox: gamma and C must be > 0");
  }
};

using ProxParams = ProxParamsT<double>;

/// Hard threshold on the positive part: 0 on (0, sqrt(2 gamma C)], identity
/// elsewhere. The right endpoint is inside the zeroed interval.
template <typename Scalar>
Scalar prox_l01_scalar(Scalar z, const ProxParamsT<Scalar>& p) {
  return (z > Scalar(0) && z <= p.threshold) ? Scalar(0) : z;
}

template <typename Derived>
VectorX<typename Derived::Scalar> prox_l01_vector(
    const Eigen::MatrixBase<Derived>& z,
    const ProxParamsT<typename Derived::Scalar>& p) {
  using Scalar = typename Derived::Scalar;
  return z.unaryExpr([&p](Scalar v) { return prox_l01_scalar(v, p); });
}

/// Indices the prox sends to zero: {i : z_i in (0, sqrt(2 gamma C)]}.
template <typename Derived>
IndexSet zero_set(const Eigen::MatrixBase<Derived>& z,
                  const ProxParamsT<typename Derived::Scalar>& p) {
  using Scalar = typename Derived::Scalar;
  IndexSet out;
  for (Index i = 0; i < z.size(); ++i)
    if (z[i] > Scalar(0) && z[i] <= p.threshold) out.push_back(i);
  return out;
}

}  // namespace zok
