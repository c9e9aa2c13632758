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

#include "zok/json.hpp"

#include <vector>

namespace zok {
namespace {

Json vector_json(const Vector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Index>(values.size()));
}

}  // namespace

Json to_json(const KernelSpec& spec) {
  Json j{{"family", to_string(spec.family)},
         {"augment_bias", spec.augment_bias}};
  switch (spec.family) {
    case KernelFamily::gaussian: j["bandwidth"] = spec.bandwidth; break;
    case KernelFamily::polynomial: j["degree"] = spec.degree; break;
    case KernelFamily::sigmoid:
      j["beta"] = spec.beta;
      j["theta"] = spec.theta;
      break;
    case KernelFamily::linear: break;
  }
  return j;
}

KernelSpec kernel_from_json(const Json& j) {
  KernelSpec s;
  s.family = parse_kernel_family(j.at("family").get<std::string>());
  s.augment_bias = j.value("augment_bias", true);
  s.bandwidth = j.value("bandwidth", s.bandwidth);
  s.degree = j.value("degree", s.degree);
  s.beta = j.value("beta", s.beta);
  s.theta = j.value("theta", s.theta);
  s.validate();
  return s;
}

Json to_json(const SolverConfig& cfg) {
  Json j{{"C", cfg.C},
         {"sigma_admm", cfg.sigma_admm},
         {"eta", cfg.eta},
         {"max_iter", cfg.max_iter},
         {"tol", cfg.tol},
         {"alpha0_scale", cfg.alpha0_scale},
         {"cg_tol", cfg.cg.tol},
         {"cg_max_iter", cfg.cg.max_iter},
         {"cg_warm_start", cfg.cg.warm_start},
         {"alpha_system",
          cfg.alpha_system == AlphaSystem::reduced ? "reduced" : "full"}};
  j["ridge_jitter"] = cfg.ridge_jitter ? Json(*cfg.ridge_jitter) : Json();
  return j;
}

SolverConfig solver_config_from_json(const Json& j, SolverConfig base) {
  base.C = j.value("C", base.C);
  base.sigma_admm = j.value("sigma_admm", base.sigma_admm);
  base.eta = j.value("eta", base.eta);
  base.max_iter = j.value("max_iter", base.max_iter);
  base.tol = j.value("tol", base.tol);
  base.alpha0_scale = j.value("alpha0_scale", base.alpha0_scale);
  base.cg.tol = j.value("cg_tol", base.cg.tol);
  base.cg.max_iter = j.value("cg_max_iter", base.cg.max_iter);
  base.cg.warm_start = j.value("cg_warm_start", base.cg.warm_start);
  if (j.contains("alpha_system")) {
    const auto name = j["alpha_system"].get<std::string>();
    if (name == "reduced") base.alpha_system = AlphaSystem::reduced;
    else if (name == "full") base.alpha_system = AlphaSystem::full;
    else throw ArgumentError("alpha_system must be reduced or full");
  }
  if (j.contains("ridge_jitter") && !j["ridge_jitter"].is_null())
    base.ridge_jitter = j["ridge_jitter"].get<double>();
  return base;
}

Json to_json(const ScalingMap& s) {
  return Json{{"min", vector_json(s.min)}, {"max", vector_json(s.max)}};
}

ScalingMap scaling_from_json(const Json& j) {
  ScalingMap s{vector_from(j.at("min")), vector_from(j.at("max"))};
  if (s.min.size() != s.max.size())
    throw ParseError("scaling map min/max lengths differ", 0);
  return s;
}

Json to_json(const Certificate& c) {
  Json j{{"theta1", c.theta1},
         {"theta2", c.theta2},
         {"converged", c.converged},
         {"iterations_used", c.iterations_used},
         {"gamma", c.gamma},
         {"jitter", c.jitter},
         {"cg_iterations", c.cg_iterations}};
  j["lambda_min"] = c.lambda_min ? Json(*c.lambda_min) : Json();
  return j;
}

}  // namespace zok
