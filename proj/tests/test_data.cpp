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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "support.hpp"
#include "zok/data.hpp"

using namespace zok;
using zok::testing::write_temp;

TEST_CASE("csv: label in last column, 0 maps to -1") {
  const auto path = write_temp("basic.csv", "1.5,2,1\n-3,4e-1,0\n0,0,-1\n");
  const Dataset d = load_csv(path);
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 2);
  CHECK(d.features(0, 0) == 1.5);
  CHECK(d.features(1, 1) == doctest::Approx(0.4));
  CHECK(d.labels[0] == 1.0);
  CHECK(d.labels[1] == -1.0);
  CHECK(d.labels[2] == -1.0);
  CHECK(d.name == "basic");
}

TEST_CASE("csv: header row is detected and skipped") {
  const auto path = write_temp("header.csv", "a,b,label\n1,2,1\n3,4,-1\n");
  const Dataset d = load_csv(path);
  CHECK(d.rows() == 2);
  CHECK(d.features(1, 0) == 3.0);
}

TEST_CASE("csv: label column can be chosen or omitted") {
  const auto path = write_temp("first.csv", "1,5,6\n-1,7,8\n");
  CsvOptions first;
  first.label_column = 0;
  const Dataset d = load_csv(path, first);
  CHECK(d.cols() == 2);
  CHECK(d.labels[1] == -1.0);
  CHECK(d.features(1, 1) == 8.0);

  CsvOptions none;
  none.label_column = std::nullopt;
  const Dataset u = load_csv(path, none);
  CHECK_FALSE(u.has_labels());
  CHECK(u.cols() == 3);
}

TEST_CASE("csv: parse errors carry the line number") {
  const auto path = write_temp("bad.csv", "1,2,1\n3,x,-1\n");
  try {
    load_csv(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_csv(write_temp("ragged.csv", "1,2,1\n3,-1\n")),
                  ParseError);
  CHECK_THROWS_AS(load_csv(write_temp("label2.csv", "1,2,2\n3,4,-1\n")),
                  ParseError);
  CHECK_THROWS_AS(load_csv(write_temp("empty.csv", "")), ParseError);
  CHECK_THROWS_AS(load_csv("/nonexistent/zok.csv"), ArgumentError);
}

TEST_CASE("csv: single-class training file is rejected unless allowed") {
  const auto path = write_temp("one.csv", "1,1\n2,1\n");
  CHECK_THROWS_AS(load_csv(path), ValidationError);
  CsvOptions opts;
  opts.require_both_classes = false;
  CHECK(load_csv(path, opts).rows() == 2);
}

TEST_CASE("libsvm: sparse rows fill with zeros") {
  const auto path =
      write_temp("basic.libsvm", "+1 1:0.5 3:2\n-1 2:1.25\n0 1:-1 2:1 3:1\n");
  const Dataset d = load_libsvm(path);
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 3);
  CHECK(d.features(0, 1) == 0.0);
  CHECK(d.features(0, 2) == 2.0);
  CHECK(d.features(1, 1) == 1.25);
  CHECK(d.labels[2] == -1.0);
}

TEST_CASE("libsvm: malformed input") {
  CHECK_THROWS_AS(load_libsvm(write_temp("dec.libsvm", "1 2:1 1:1\n-1 1:0\n")),
                  ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("zero.libsvm", "1 0:1\n-1 1:0\n")),
                  ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("colon.libsvm", "1 1-1\n-1 1:0\n")),
                  ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("lab.libsvm", "3 1:1\n-1 1:0\n")),
                  ParseError);
}

TEST_CASE("validate and require_trainable") {
  Dataset d = zok::testing::two_point_dataset();
  CHECK_NOTHROW(d.require_trainable());
  d.labels[0] = 0.5;
  CHECK_THROWS_AS(d.validate(), ValidationError);
  d.labels[0] = -1.0;
  d.features(0, 0) = std::nan("");
  CHECK_THROWS_AS(d.validate(), ValidationError);
  Dataset one = d.subset({1});
  CHECK_THROWS_AS(one.require_trainable(), ValidationError);
}

TEST_CASE("scaling: min-max examples") {
  Dataset d;
  d.features.resize(3, 2);
  d.features << 0, 4, 5, 4, 10, 4;
  const ScalingMap s = fit_scaling(d);
  const Dataset t = apply_scaling(d, s);
  CHECK(t.features(0, 0) == -1.0);
  CHECK(t.features(1, 0) == 0.0);
  CHECK(t.features(2, 0) == 1.0);
  for (Index i = 0; i < 3; ++i) CHECK(t.features(i, 1) == 0.0);

  Matrix out(1, 2);
  out << 12, 4;
  CHECK(apply_scaling(out, s)(0, 0) == doctest::Approx(1.4));
  CHECK_THROWS_AS(apply_scaling(Matrix::Zero(1, 3), s), ArgumentError);
}

TEST_CASE("scaling property: fitted columns span exactly [-1, 1]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> size(2, 40);
    Dataset d;
    d.features = zok::testing::random_matrix(size(rng), size(rng) % 6 + 1,
                                             rng, -50.0, 50.0);
    const Dataset t = apply_scaling(d, fit_scaling(d));
    for (Index j = 0; j < t.cols(); ++j) {
      CHECK(t.features.col(j).minCoeff() == -1.0);
      CHECK(t.features.col(j).maxCoeff() == 1.0);
    }
  }
}

namespace {

Dataset labelled(Index positives, Index negatives) {
  Dataset d;
  d.features = Matrix::Zero(positives + negatives, 1);
  d.labels = Vector::Constant(positives + negatives, -1.0);
  d.labels.head(positives).setOnes();
  for (Index i = 0; i < d.rows(); ++i) d.features(i, 0) = double(i);
  return d;
}

}  // namespace

TEST_CASE("folds: balanced m=10, k=5 puts one of each class per fold") {
  const FoldPlan plan = stratified_kfold(labelled(5, 5), 5, 3);
  const Dataset d = labelled(5, 5);
  for (int f = 0; f < 5; ++f) {
    const auto test = plan.test_indices(f);
    REQUIRE(test.size() == 2);
    CHECK(d.labels[test[0]] + d.labels[test[1]] == 0.0);
  }
}

TEST_CASE("folds: determinism and seed sensitivity") {
  const Dataset d = labelled(30, 50);
  CHECK(stratified_kfold(d, 10, 7).assignments ==
        stratified_kfold(d, 10, 7).assignments);
  CHECK(stratified_kfold(d, 10, 7).assignments !=
        stratified_kfold(d, 10, 8).assignments);
}

TEST_CASE("folds: bre-sized split gives folds of 69 or 70") {
  const Dataset d = labelled(241, 458);
  const FoldPlan plan = stratified_kfold(d, 10, 0);
  int seventy = 0;
  for (int f = 0; f < 10; ++f) {
    const auto n = plan.test_indices(f).size();
    CHECK((n == 69 || n == 70));
    seventy += n == 70;
  }
  CHECK(seventy == 9);
}

TEST_CASE("folds: bad k") {
  const Dataset d = labelled(3, 3);
  CHECK_THROWS_AS(stratified_kfold(d, 1, 0), ArgumentError);
  CHECK_THROWS_AS(stratified_kfold(d, 7, 0), ArgumentError);
}

TEST_CASE("folds property: partition and per-fold class balance") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> cls(2, 60);
    const Index pos = cls(rng), neg = cls(rng);
    const Dataset d = labelled(pos, neg);
    const int k = std::uniform_int_distribution<int>(
        2, static_cast<int>(std::min(pos, neg)))(rng);
    const FoldPlan plan = stratified_kfold(d, k, rng());

    std::multiset<Index> seen;
    for (int f = 0; f < k; ++f) {
      const auto test = plan.test_indices(f);
      const auto train = plan.train_indices(f);
      CHECK(test.size() + train.size() == static_cast<std::size_t>(d.rows()));
      seen.insert(test.begin(), test.end());
      const double p = std::count_if(test.begin(), test.end(), [&](Index i) {
        return d.labels[i] > 0;
      });
      CHECK(std::abs(p - double(pos) / k) <= 1.0);
      const double n = double(test.size()) - p;
      CHECK(std::abs(n - double(neg) / k) <= 1.0);
    }
    REQUIRE(seen.size() == static_cast<std::size_t>(d.rows()));
    Index expect = 0;
    for (Index i : seen) CHECK(i == expect++);
  }
}

TEST_CASE("flip: zero rate is the identity") {
  std::mt19937_64 rng(1);
  const Dataset d = zok::testing::random_dataset(40, 3, rng);
  const Dataset f = flip_labels(d, {0.0, 9, true});
  CHECK(f.labels == d.labels);
  CHECK(f.features == d.features);
}

TEST_CASE("flip: r=0.10 on m=100 flips exactly 10") {
  const Dataset d = labelled(34, 66);
  for (bool stratified : {true, false}) {
    const Dataset f = flip_labels(d, {0.10, 4, stratified});
    CHECK((f.labels - d.labels).cwiseAbs().sum() / 2.0 == 10.0);
    CHECK(f.features == d.features);
  }
  CHECK_THROWS_AS(flip_labels(d, {1.0, 0, true}), ArgumentError);
  CHECK_THROWS_AS(flip_labels(d, {-0.1, 0, true}), ArgumentError);
}

TEST_CASE("flip: unstratified double flip with the same seed restores labels") {
  const Dataset d = labelled(34, 66);
  const NoiseSpec spec{0.2, 77, false};
  CHECK(flip_labels(flip_labels(d, spec), spec).labels == d.labels);
}

TEST_CASE("flip: stratified counts follow the class rate") {
  const auto [p, n] = stratified_flip_counts(34, 66, 0.10);
  CHECK(p + n == 10);
  CHECK(p == 3);
  CHECK(n == 7);
}

TEST_CASE("flip property: Hamming distance equals round(r m)") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> rate(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> cls(1, 80);
    const Dataset d = labelled(cls(rng), cls(rng));
    const double r = rate(rng);
    const NoiseSpec spec{r, rng(), trial % 2 == 0};
    const Dataset f = flip_labels(d, spec);
    const double flips = (f.labels - d.labels).cwiseAbs().sum() / 2.0;
    CHECK(flips == std::round(r * double(d.rows())));
    CHECK(flip_labels(d, spec).labels == f.labels);
  }
}
