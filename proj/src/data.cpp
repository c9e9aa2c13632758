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

#include "zok/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace zok {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double map_label(double raw, std::size_t line) {
  if (raw == 1.0) return 1.0;
  if (raw == -1.0 || raw == 0.0) return -1.0;
  throw ParseError("label must be +1, -1, 0 or 1", line);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  return in;
}

std::string stem(const std::string& path) {
  auto base = path.substr(path.find_last_of('/') + 1);
  return base.substr(0, base.find_last_of('.'));
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows, Index cols) {
  Matrix x = Matrix::Zero(static_cast<Index>(rows.size()), cols);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < static_cast<Index>(rows[i].size()); ++j)
      x(i, j) = rows[i][j];
  return x;
}

}  // namespace

Index Dataset::count(double label) const {
  return (labels.array() == label).count();
}

Dataset Dataset::subset(const IndexSet& idx) const {
  Dataset out;
  out.name = name;
  out.features = features(idx, Eigen::all);
  if (has_labels()) out.labels = labels(idx);
  return out;
}

void Dataset::validate() const {
  if (has_labels()) {
    if (labels.size() != features.rows())
      throw ValidationError("label count does not match row count");
    for (Index i = 0; i < labels.size(); ++i)
      if (labels[i] != 1.0 && labels[i] != -1.0)
        throw ValidationError("label " + std::to_string(i) + " is not +-1");
  }
  if (!features.allFinite())
    throw ValidationError("features contain non-finite values");
}

void Dataset::require_trainable() const {
  validate();
  if (!has_labels()) throw ValidationError("training data needs labels");
  if (rows() < 2) throw ValidationError("training data needs m >= 2");
  if (count(1.0) == 0 || count(-1.0) == 0)
    throw ValidationError("training data needs both classes");
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  auto in = open(path);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::size_t arity = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto f : fields) {
      const auto v = parse_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && arity == 0) {
        arity = fields.size();  // header
        continue;
      }
      throw ParseError("non-numeric field in " + path, lineno);
    }
    if (arity == 0) arity = values.size();
    if (values.size() != arity)
      throw ParseError("row has " + std::to_string(values.size()) +
                           " fields, expected " + std::to_string(arity),
                       lineno);
    if (options.label_column) {
      int col = *options.label_column;
      if (col < 0) col += static_cast<int>(arity);
      if (col < 0 || col >= static_cast<int>(arity))
        throw ArgumentError("label column out of range");
      labels.push_back(map_label(values[col], lineno));
      values.erase(values.begin() + col);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no data rows in " + path, 0);

  Dataset d;
  d.name = stem(path);
  d.features = to_matrix(rows, static_cast<Index>(rows.front().size()));
  d.labels = Eigen::Map<const Vector>(labels.data(),
                                      static_cast<Index>(labels.size()));
  d.validate();
  if (options.label_column && options.require_both_classes &&
      (d.count(1.0) == 0 || d.count(-1.0) == 0))
    throw ValidationError(path + " contains a single class");
  return d;
}

Dataset load_libsvm(const std::string& path) {
  auto in = open(path);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  Index width = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::istringstream tokens{std::string(text)};
    std::string token;
    tokens >> token;
    const auto label = parse_number(token);
    if (!label) throw ParseError("bad label '" + token + "'", lineno);
    labels.push_back(map_label(*label, lineno));

    std::vector<double> row;
    long previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected idx:val, got '" + token + "'", lineno);
      long idx = 0;
      const auto [p, ec] =
          std::from_chars(token.data(), token.data() + colon, idx);
      if (ec != std::errc() || p != token.data() + colon || idx < 1)
        throw ParseError("bad feature index '" + token + "'", lineno);
      if (idx <= previous)
        throw ParseError("feature indices must be strictly increasing",
                         lineno);
      const auto value = parse_number(std::string_view(token).substr(colon + 1));
      if (!value) throw ParseError("bad feature value '" + token + "'", lineno);
      if (static_cast<long>(row.size()) < idx) row.resize(idx, 0.0);
      row[idx - 1] = *value;
      previous = idx;
    }
    width = std::max<Index>(width, static_cast<Index>(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows in " + path, 0);

  Dataset d;
  d.name = stem(path);
  d.features = to_matrix(rows, width);
  d.labels = Eigen::Map<const Vector>(labels.data(),
                                      static_cast<Index>(labels.size()));
  d.validate();
  if (d.count(1.0) == 0 || d.count(-1.0) == 0)
    throw ValidationError(path + " contains a single class");
  return d;
}

ScalingMap fit_scaling(const Dataset& train) {
  return {train.features.colwise().minCoeff().transpose(),
          train.features.colwise().maxCoeff().transpose()};
}

Matrix apply_scaling(const Matrix& x, const ScalingMap& s) {
  if (x.cols() != s.min.size())
    throw ArgumentError("scaling map dimension mismatch");
  Matrix out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    const double range = s.max[j] - s.min[j];
    if (range > 0.0)
      out.col(j) = (2.0 * (x.col(j).array() - s.min[j]) / range - 1.0).matrix();
    else
      out.col(j).setZero();
  }
  return out;
}

Dataset apply_scaling(const Dataset& d, const ScalingMap& s) {
  Dataset out = d;
  out.features = apply_scaling(d.features, s);
  return out;
}

IndexSet FoldPlan::train_indices(int fold) const {
  IndexSet idx;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) idx.push_back(static_cast<Index>(i));
  return idx;
}

IndexSet FoldPlan::test_indices(int fold) const {
  IndexSet idx;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) idx.push_back(static_cast<Index>(i));
  return idx;
}

FoldPlan stratified_kfold(const Dataset& d, int k, std::uint64_t seed) {
  const Index m = d.rows();
  if (k < 2 || k > m)
    throw ArgumentError("fold count must lie in [2, m], got " +
                        std::to_string(k));
  if (!d.has_labels()) throw ArgumentError("stratified folds need labels");

  FoldPlan plan;
  plan.fold_count = k;
  plan.seed = seed;
  plan.assignments.assign(static_cast<std::size_t>(m), -1);

  std::mt19937_64 rng(seed);
  int cursor = 0;
  for (const double label : {1.0, -1.0}) {
    IndexSet members;
    for (Index i = 0; i < m; ++i)
      if (d.labels[i] == label) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    for (const Index i : members) {
      plan.assignments[static_cast<std::size_t>(i)] = cursor;
      cursor = (cursor + 1) % k;
    }
  }
  return plan;
}

std::pair<Index, Index> stratified_flip_counts(Index positives,
                                               Index negatives, double rate) {
  const Index m = positives + negatives;
  const auto total = static_cast<Index>(std::llround(rate * double(m)));
  auto pos = static_cast<Index>(
      std::llround(double(total) * double(positives) / double(m)));
  pos = std::clamp<Index>(pos, total - negatives, positives);
  return {pos, total - pos};
}

Dataset flip_labels(const Dataset& d, const NoiseSpec& spec) {
  if (!(spec.flip_rate >= 0.0 && spec.flip_rate < 1.0))
    throw ArgumentError("flip rate must lie in [0, 1)");
  if (!d.has_labels()) throw ArgumentError("flip_labels needs labels");

  const Index m = d.rows();
  std::mt19937_64 rng(spec.seed);
  IndexSet chosen;
  if (spec.stratified) {
    const auto [pos, neg] =
        stratified_flip_counts(d.count(1.0), d.count(-1.0), spec.flip_rate);
    for (const auto& [label, quota] : {std::pair{1.0, pos}, {-1.0, neg}}) {
      IndexSet members;
      for (Index i = 0; i < m; ++i)
        if (d.labels[i] == label) members.push_back(i);
      std::shuffle(members.begin(), members.end(), rng);
      chosen.insert(chosen.end(), members.begin(), members.begin() + quota);
    }
  } else {
    IndexSet all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), Index{0});
    std::shuffle(all.begin(), all.end(), rng);
    const auto total =
        static_cast<Index>(std::llround(spec.flip_rate * double(m)));
    chosen.assign(all.begin(), all.begin() + total);
  }

  Dataset out = d;
  for (const Index i : chosen) out.labels[i] = -out.labels[i];
  return out;
}

}  // namespace zok
