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
#include <string>
#include <vector>

#include "zok/common.hpp"

namespace zok {

/// Binary classification data: one row per sample, labels in {+1, -1}.
/// An unlabeled set (prediction input) has an empty `labels` vector.
struct Dataset {
  Matrix features;
  Vector labels;
  std::string name;

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }
  bool has_labels() const { return labels.size() > 0; }

  Index count(double label) const;

  /// Row subset in the given order.
  Dataset subset(const IndexSet& idx) const;

  /// Throws ValidationError unless labels are +-1 and features finite.
  void validate() const;
  /// validate() plus m >= 2 and both classes present.
  void require_trainable() const;
};

struct CsvOptions {
  /// Column holding the label; negative counts from the end (-1 = last).
  /// std::nullopt reads an unlabeled file.
  std::optional<int> label_column = -1;
  bool require_both_classes = true;
};

/// Comma-separated values. A first line that does not parse as numbers is
/// taken as a header. Labels 1/-1 are kept, 0 maps to -1.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// "label idx:val ..." with 1-based, strictly increasing indices.
Dataset load_libsvm(const std::string& path);

/// Per-column affine map onto [-1, 1].
struct ScalingMap {
  Vector min;
  Vector max;
};

ScalingMap fit_scaling(const Dataset& train);
/// Extrapolates affinely; out-of-range inputs are not clamped.
Dataset apply_scaling(const Dataset& d, const ScalingMap& s);
Matrix apply_scaling(const Matrix& x, const ScalingMap& s);

struct FoldPlan {
  int fold_count = 10;
  std::vector<int> assignments;
  std::uint64_t seed = 0;

  IndexSet train_indices(int fold) const;
  IndexSet test_indices(int fold) const;
};

/// Stratified partition into k folds. Classes are shuffled separately and
/// dealt round-robin with a running fold cursor, so fold sizes and per-fold
/// class counts each differ by at most one.
FoldPlan stratified_kfold(const Dataset& d, int k, std::uint64_t seed);

struct NoiseSpec {
  double flip_rate = 0.0;
  std::uint64_t seed = 0;
  bool stratified = true;
};

/// Negates exactly round(r*m) labels. Stratified mode splits the count
/// between classes in proportion to their sizes.
Dataset flip_labels(const Dataset& d, const NoiseSpec& spec);

/// Label-flip count split for stratified noise: {positives, negatives}.
std::pair<Index, Index> stratified_flip_counts(Index positives,
                                               Index negatives, double rate);

}  // namespace zok
