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
#include <cstdint>
#include <optional>
#include <string>

#include "zok/common.hpp"
#include "zok/data.hpp"

namespace zok {

enum class KernelFamily { gaussian, polynomial, sigmoid, linear };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// Kernel family plus parameters. Use the named constructors; they check the
/// parameter constraints.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double bandwidth = 1.0;  ///< gaussian sigma
  int degree = 1;          ///< polynomial d
  double beta = 2.0;       ///< sigmoid slope, > 1
  double theta = -1.0;     ///< sigmoid offset, < 0
  /// Append a constant 1 coordinate before evaluating. Has no effect on the
  /// gaussian kernel, whose squared distance ignores a shared coordinate.
  bool augment_bias = true;

  static KernelSpec gaussian(double bandwidth);
  static KernelSpec polynomial(int degree);
  static KernelSpec sigmoid(double beta, double theta);
  static KernelSpec linear();

  void validate() const;

  /// The family's tunable parameter (bandwidth, degree, beta); 0 for linear.
  double parameter() const;
  KernelSpec with_parameter(double value) const;

  /// Stable one-line text form, used for cache keys and reports.
  std::string serialize() const;
};

namespace detail {

template <typename Scalar, typename A, typename B>
Scalar augmented_dot(const Eigen::MatrixBase<A>& a,
                     const Eigen::MatrixBase<B>& b, bool augment) {
  Scalar dot = a.dot(b);
  return augment ? dot + Scalar(1) : dot;
}

}  // namespace detail

/// k(a~, b~) for two points given in raw (unaugmented) coordinates.
template <typename A, typename B>
typename A::Scalar eval_kernel(const Eigen::MatrixBase<A>& a,
                               const Eigen::MatrixBase<B>& b,
                               const KernelSpec& spec) {
  using Scalar = typename A::Scalar;
  if (a.size() != b.size())
    throw ArgumentError("eval_kernel: dimension mismatch (" +
                        std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  switch (spec.family) {
    case KernelFamily::gaussian: {
      const Scalar d2 = (a.derived() - b.derived()).squaredNorm();
      return std::exp(-d2 / (Scalar(2) * spec.bandwidth * spec.bandwidth));
    }
    case KernelFamily::polynomial:
      return std::pow(detail::augmented_dot<Scalar>(a, b, spec.augment_bias),
                      spec.degree);
    case KernelFamily::sigmoid:
      return std::tanh(
          spec.beta * detail::augmented_dot<Scalar>(a, b, spec.augment_bias) +
          spec.theta);
    case KernelFamily::linear:
      return detail::augmented_dot<Scalar>(a, b, spec.augment_bias);
  }
  return Scalar(0);
}

/// Dense m x m kernel matrix; `signed_form` marks entries y_i y_j K_ij.
struct GramMatrix {
  Matrix entries;
  KernelSpec spec;
  bool signed_form = false;

  Index size() const { return entries.rows(); }
};

/// K_ij = k(x~_i, x~_j). Each unordered pair is evaluated once, so the result
/// is exactly symmetric.
GramMatrix gram_matrix(const Matrix& x, const KernelSpec& spec);
GramMatrix gram_matrix(const Dataset& d, const KernelSpec& spec);

/// Rectangular kernel block k(a_i, b_j), used at prediction time.
Matrix cross_kernel(const Matrix& a, const Matrix& b, const KernelSpec& spec);

/// V K V with V = Diag(labels).
GramMatrix sign_gram(const GramMatrix& g, const Vector& labels);

/// Rows of `g` listed by `idx`, in that order (|idx| x m).
Matrix rows_submatrix(const GramMatrix& g, const IndexSet& idx);

/// On-disk cache of unsigned Gram matrices keyed by (features, spec).
///
/// File layout (little-endian): "ZOKG", uint32 version = 1, uint64 m,
/// uint32 spec length, spec text, then m*m row-major doubles.
class GramCache {
 public:
  explicit GramCache(std::string directory);

  /// ZOK_CACHE_DIR, or std::nullopt when unset or empty.
  static std::optional<GramCache> from_environment();

  GramMatrix get_or_compute(const Matrix& x, const KernelSpec& spec) const;
  std::string path_for(const Matrix& x, const KernelSpec& spec) const;

 private:
  std::string directory_;
};

/// FNV-1a over the raw bytes of `x` and the spec text.
std::uint64_t content_hash(const Matrix& x, const KernelSpec& spec);

}  // namespace zok
