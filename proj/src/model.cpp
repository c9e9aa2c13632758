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

#include "zok/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "zok/json.hpp"

namespace zok {

bool TrainedModel::sign_pattern_holds(double slack) const {
  const double floor = -std::sqrt(2.0 * config_snapshot.C /
                                  config_snapshot.gamma());
  for (Index i = 0; i < alpha.size(); ++i)
    if (alpha[i] < floor - slack || alpha[i] >= slack) return false;
  return true;
}

IndexSet extract_svs(const Vector& alpha, const Vector& u, double gamma,
                     double C) {
  if (!(gamma > 0.0) || !(C > 0.0))
    throw ArgumentError("extract_svs: gamma and C must be > 0");
  if (alpha.size() != u.size())
    throw ArgumentError("extract_svs: alpha and u differ in length");
  const double threshold = std::sqrt(2.0 * gamma * C);
  IndexSet out;
  for (Index i = 0; i < alpha.size(); ++i) {
    const double s = u[i] - gamma * alpha[i];
    if (s > 0.0 && s <= threshold) out.push_back(i);
  }
  return out;
}

TrainedModel build_model(const Dataset& train, const Vector& alpha,
                         const IndexSet& svs, const KernelSpec& spec,
                         const SolverConfig& cfg) {
  if (alpha.size() != train.rows())
    throw ArgumentError("build_model: alpha length does not match data");
  TrainedModel model;
  model.sv_indices = svs;
  model.alpha = alpha(svs);
  model.sv_inputs = train.features(svs, Eigen::all);
  model.sv_labels = train.labels(svs);
  model.spec = spec;
  model.config_snapshot = cfg;
  return model;
}

double decision_value(const TrainedModel& model, const Vector& x) {
  if (x.size() != model.dimension())
    throw ArgumentError("decision_value: expected " +
                        std::to_string(model.dimension()) +
                        " features, got " + std::to_string(x.size()));
  double f = 0.0;
  for (Index i = 0; i < model.sv_count(); ++i)
    f -= model.alpha[i] * model.sv_labels[i] *
         eval_kernel(model.sv_inputs.row(i), x.transpose(), model.spec);
  return f;
}

Vector decision_values(const TrainedModel& model, const Matrix& x) {
  if (x.cols() != model.dimension())
    throw ArgumentError("decision_values: expected " +
                        std::to_string(model.dimension()) +
                        " features, got " + std::to_string(x.cols()));
  if (model.sv_count() == 0) return Vector::Zero(x.rows());
  const Vector weights = -(model.alpha.array() * model.sv_labels.array());
  return cross_kernel(x, model.sv_inputs, model.spec) * weights;
}

double predict(const TrainedModel& model, const Vector& x) {
  return decision_value(model, x) >= 0.0 ? 1.0 : -1.0;
}

Vector predict(const TrainedModel& model, const Matrix& x) {
  return decision_values(model, x).unaryExpr(
      [](double f) { return f >= 0.0 ? 1.0 : -1.0; });
}

double accuracy(const TrainedModel& model, const Dataset& test) {
  if (!test.has_labels() || test.rows() == 0)
    throw ArgumentError("accuracy: test set must be labelled and nonempty");
  const Vector predicted = predict(model, test.features);
  return static_cast<double>((predicted.array() == test.labels.array()).count()) /
         static_cast<double>(test.rows());
}

namespace {

constexpr std::uint8_t kModelVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(sizeof(T) * count));
}

template <typename T>
void read_raw(std::ifstream& in, T* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(sizeof(T) * count));
  if (!in) throw ParseError("model file truncated", 0);
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  Json envelope{{"format", "zok-model"},
                {"kernel", to_json(model.spec)},
                {"sv_count", model.sv_count()},
                {"dimension", model.dimension()},
                {"config", to_json(model.config_snapshot)}};
  envelope["scaling"] = model.scaling ? to_json(*model.scaling) : Json();
  const std::string text = envelope.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write " + path);
  out.put(static_cast<char>(kModelVersion));
  const auto length = static_cast<std::uint32_t>(text.size());
  write_raw(out, &length, 1);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  const auto k = static_cast<std::size_t>(model.sv_count());
  const auto n = static_cast<std::size_t>(model.dimension());
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rows = model.sv_inputs;
  write_raw(out, rows.data(), k * n);
  write_raw(out, model.alpha.data(), k);
  write_raw(out, model.sv_labels.data(), k);
  std::vector<std::uint64_t> idx(model.sv_indices.begin(),
                                 model.sv_indices.end());
  write_raw(out, idx.data(), k);
  if (!out) throw ArgumentError("failed writing " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path);
  const int version = in.get();
  if (version != kModelVersion)
    throw ParseError("unsupported model version " + std::to_string(version), 0);
  std::uint32_t length = 0;
  read_raw(in, &length, 1);
  std::string text(length, '\0');
  read_raw(in, text.data(), length);

  Json envelope;
  try {
    envelope = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad model envelope: ") + e.what(), 0);
  }
  if (envelope.value("format", "") != "zok-model")
    throw ParseError("not a zok model file", 0);

  TrainedModel model;
  model.spec = kernel_from_json(envelope.at("kernel"));
  model.config_snapshot = solver_config_from_json(envelope.at("config"));
  if (!envelope["scaling"].is_null())
    model.scaling = scaling_from_json(envelope["scaling"]);
  const auto k = envelope.at("sv_count").get<Index>();
  const auto n = envelope.at("dimension").get<Index>();

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(k, n);
  read_raw(in, rows.data(), static_cast<std::size_t>(k * n));
  model.sv_inputs = rows;
  model.alpha.resize(k);
  read_raw(in, model.alpha.data(), static_cast<std::size_t>(k));
  model.sv_labels.resize(k);
  read_raw(in, model.sv_labels.data(), static_cast<std::size_t>(k));
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(k));
  read_raw(in, idx.data(), idx.size());
  model.sv_indices.assign(idx.begin(), idx.end());
  return model;
}

}  // namespace zok
