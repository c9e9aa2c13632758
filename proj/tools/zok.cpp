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

// zok: train and evaluate kernel SVMs with the 0/1 soft-margin loss.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zok/data.hpp"
#include "zok/eval.hpp"
#include "zok/json.hpp"
#include "zok/kernel.hpp"
#include "zok/model.hpp"
#include "zok/solver.hpp"

namespace fs = std::filesystem;
using namespace zok;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

/// Flag values as parsed; unset optionals fall back to the config file, then
/// to built-in defaults.
struct Flags {
  std::string config;
  std::string data;
  std::optional<std::string> format;
  std::optional<std::string> kernel;
  std::optional<double> kernel_param;
  std::optional<double> C;
  std::vector<double> sigma_admm;
  std::optional<double> eta;
  std::optional<int> max_iter;
  std::optional<double> tol;
  std::optional<int> folds;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> noise_seed;
  std::optional<std::string> grid_range;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> scaling;
  std::vector<double> rates;
  bool include_gram_time = false;
  bool reuse_clean_params = false;
  // predict
  std::string model;
};

struct RunConfig {
  std::string data;
  std::string format = "csv";
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  SolverConfig solver;
  GridSpec grid = GridSpec::log2_range(-8, 8);
  int folds = 10;
  std::uint64_t seed = 0;
  std::uint64_t noise_seed = 0;
  std::string out = ".";
  int jobs = 1;
  ScalingMode scaling = ScalingMode::fit_on_train;
  std::vector<double> rates = {0.05, 0.10};
  bool include_gram_time = false;
  bool retune = true;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ArgumentError("grid range must look like lo:hi, got '" + text + "'");
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

Json config_json(const RunConfig& cfg) {
  Json grid{{"c_values", cfg.grid.c_values},
            {"kernel_param_values", cfg.grid.kernel_param_values},
            {"sigma_admm_values", cfg.grid.sigma_admm_values}};
  return Json{{"data", cfg.data},
              {"format", cfg.format},
              {"kernel", to_json(cfg.kernel)},
              {"solver", to_json(cfg.solver)},
              {"grid", grid},
              {"folds", cfg.folds},
              {"seed", cfg.seed},
              {"noise_seed", cfg.noise_seed},
              {"jobs", cfg.jobs},
              {"scaling", cfg.scaling == ScalingMode::fit_on_train ? "train" : "whole"},
              {"rates", cfg.rates},
              {"include_gram_time", cfg.include_gram_time},
              {"retune", cfg.retune}};
}

/// Defaults, then the JSON config file, then explicit flags.
RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  Json file;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ArgumentError("cannot open config " + f.config);
    file = Json::parse(in);
  }
  auto pick = [&file](const char* key, auto fallback) {
    return file.contains(key) ? file[key].get<decltype(fallback)>() : fallback;
  };

  cfg.data = f.data.empty() ? pick("data", std::string()) : f.data;
  cfg.format = f.format.value_or(pick("format", cfg.format));
  if (file.contains("solver"))
    cfg.solver = solver_config_from_json(file["solver"], cfg.solver);

  std::string family = pick("kernel", std::string("gaussian"));
  if (f.kernel) family = *f.kernel;
  const double param = f.kernel_param.value_or(pick("kernel_param", 1.0));
  switch (parse_kernel_family(family)) {
    case KernelFamily::gaussian: cfg.kernel = KernelSpec::gaussian(param); break;
    case KernelFamily::polynomial:
      cfg.kernel = KernelSpec::polynomial(static_cast<int>(param));
      break;
    case KernelFamily::sigmoid:
      cfg.kernel = KernelSpec::sigmoid(param, pick("sigmoid_theta", -1.0));
      break;
    case KernelFamily::linear: cfg.kernel = KernelSpec::linear(); break;
  }

  if (f.C) cfg.solver.C = *f.C;
  if (!f.sigma_admm.empty()) cfg.solver.sigma_admm = f.sigma_admm.front();
  if (f.eta) cfg.solver.eta = *f.eta;
  if (f.max_iter) cfg.solver.max_iter = *f.max_iter;
  if (f.tol) cfg.solver.tol = *f.tol;

  std::vector<double> sigmas = {cfg.solver.sigma_admm};
  if (file.contains("grid") && file["grid"].contains("sigma_admm_values"))
    sigmas = file["grid"]["sigma_admm_values"].get<std::vector<double>>();
  if (!f.sigma_admm.empty()) sigmas = f.sigma_admm;
  auto [lo, hi] = std::pair{-8, 8};
  if (file.contains("grid") && file["grid"].contains("log2_range")) {
    const auto r = file["grid"]["log2_range"].get<std::vector<int>>();
    if (r.size() != 2) throw ArgumentError("grid.log2_range needs [lo, hi]");
    lo = r[0];
    hi = r[1];
  }
  if (f.grid_range) std::tie(lo, hi) = parse_range(*f.grid_range);
  cfg.grid = GridSpec::log2_range(lo, hi, sigmas);
  if (!f.grid_range && file.contains("grid")) {
    const auto& g = file["grid"];
    if (g.contains("c_values"))
      cfg.grid.c_values = g["c_values"].get<std::vector<double>>();
    if (g.contains("kernel_param_values"))
      cfg.grid.kernel_param_values =
          g["kernel_param_values"].get<std::vector<double>>();
  }

  cfg.folds = f.folds.value_or(pick("folds", cfg.folds));
  cfg.seed = f.seed.value_or(pick("seed", cfg.seed));
  cfg.noise_seed = f.noise_seed.value_or(pick("noise_seed", cfg.noise_seed));
  cfg.out = f.out.value_or(pick("out", cfg.out));
  cfg.jobs = f.jobs.value_or(pick("jobs", cfg.jobs));
  const std::string scaling = f.scaling.value_or(pick("scaling", std::string("train")));
  if (scaling == "train") cfg.scaling = ScalingMode::fit_on_train;
  else if (scaling == "whole") cfg.scaling = ScalingMode::whole_dataset;
  else throw ArgumentError("--scaling must be train or whole");
  cfg.rates = f.rates.empty() ? pick("rates", cfg.rates) : f.rates;
  cfg.include_gram_time = f.include_gram_time || pick("include_gram_time", false);
  cfg.retune = !f.reuse_clean_params && pick("retune", true);

  cfg.solver.validate();
  cfg.grid.validate();
  if (cfg.jobs < 1) throw ArgumentError("--jobs must be >= 1");
  return cfg;
}

Dataset load_training_data(const RunConfig& cfg) {
  if (cfg.data.empty()) throw ArgumentError("--data is required");
  if (!fs::exists(cfg.data)) throw ArgumentError("data file not found: " + cfg.data);
  if (cfg.format == "csv") return load_csv(cfg.data);
  if (cfg.format == "libsvm") return load_libsvm(cfg.data);
  throw ArgumentError("--format must be csv or libsvm");
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void print_summary_header() {
  std::cout << std::left << std::setw(10) << "dataset" << std::setw(10)
            << "kernel" << std::setw(8) << "rate" << std::setw(10) << "mACC"
            << std::setw(10) << "mNSV" << std::setw(11) << "mCPU(s)"
            << std::setw(11) << "C" << std::setw(11) << "param"
            << "sigma_admm\n";
}

void print_summary(const CvReport& r) {
  std::cout << std::left << std::setw(10) << r.dataset << std::setw(10)
            << to_string(r.spec.family) << std::setw(8)
            << r.noise_rate.value_or(0.0) << std::fixed << std::setprecision(4)
            << std::setw(10) << r.mean_acc << std::setprecision(2)
            << std::setw(10) << r.mean_nsv << std::setprecision(4)
            << std::setw(11) << r.mean_cpu << std::defaultfloat
            << std::setw(11) << r.best_params.C << std::setw(11)
            << r.best_params.kernel_param << r.best_params.sigma_admm << '\n';
}

EvalOptions eval_options(const RunConfig& cfg, const std::optional<GramCache>& cache) {
  EvalOptions o;
  o.scaling = cfg.scaling;
  o.jobs = cfg.jobs;
  o.include_gram_time = cfg.include_gram_time;
  o.cache = cache ? &*cache : nullptr;
  return o;
}

/// Writes report.json / report.csv for a list of reports and prints the table.
void emit_reports(const RunConfig& cfg, const std::vector<CvReport>& reports,
                  Json body) {
  fs::create_directories(cfg.out);
  body["config"] = config_json(cfg);
  write_json(fs::path(cfg.out) / "report.json", body);
  std::ofstream csv(fs::path(cfg.out) / "report.csv");
  write_csv_header(csv);
  for (const auto& r : reports) write_csv_rows(csv, r);
  print_summary_header();
  for (const auto& r : reports) print_summary(r);
}

int cmd_train(const RunConfig& cfg) {
  Dataset d = load_training_data(cfg);
  d.require_trainable();
  const ScalingMap map = fit_scaling(d);
  const Dataset scaled = apply_scaling(d, map);

  const auto cache = GramCache::from_environment();
  const GramMatrix gram = cache ? cache->get_or_compute(scaled.features, cfg.kernel)
                                : gram_matrix(scaled, cfg.kernel);
  SolverConfig solver = cfg.solver;
  solver.report_gamma_bound = true;
  const auto start = std::chrono::steady_clock::now();
  TrainResult result = train(scaled, cfg.kernel, solver, &gram);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.model.scaling = map;

  fs::create_directories(cfg.out);
  save_model(result.model, (fs::path(cfg.out) / "model.bin").string());
  Json cert = to_json(result.certificate);
  cert["nsv"] = result.model.sv_count();
  cert["train_accuracy"] = accuracy(result.model, scaled);
  cert["cpu_seconds"] = seconds;
  cert["config"] = config_json(cfg);
  write_json(fs::path(cfg.out) / "certificate.json", cert);

  std::cout << "converged: " << (result.certificate.converged ? "yes" : "no")
            << "  iterations: " << result.certificate.iterations_used
            << "  theta1: " << result.certificate.theta1
            << "  theta2: " << result.certificate.theta2
            << "  nsv: " << result.model.sv_count() << '\n';
  return result.certificate.converged ? kExitOk : kExitNotConverged;
}

/// Reads prediction input; a trailing extra column is treated as labels.
Dataset load_prediction_data(const std::string& path, const std::string& format,
                             Index dimension) {
  if (!fs::exists(path)) throw ArgumentError("data file not found: " + path);
  if (format == "libsvm") {
    Dataset d = load_libsvm(path);
    if (d.cols() > dimension)
      throw ArgumentError("data has more features than the model");
    if (d.cols() < dimension) {
      Matrix padded = Matrix::Zero(d.rows(), dimension);
      padded.leftCols(d.cols()) = d.features;
      d.features = std::move(padded);
    }
    return d;
  }
  Dataset d = load_csv(path, CsvOptions{std::nullopt, false});
  if (d.cols() == dimension) return d;
  if (d.cols() == dimension + 1) {
    return load_csv(path, CsvOptions{-1, false});
  }
  throw ArgumentError("data has " + std::to_string(d.cols()) +
                      " columns; model expects " + std::to_string(dimension) +
                      " features (plus an optional label)");
}

int cmd_predict(const Flags& flags) {
  if (flags.model.empty()) throw ArgumentError("--model is required");
  if (flags.data.empty()) throw ArgumentError("--data is required");
  const TrainedModel model = load_model(flags.model);
  Dataset d = load_prediction_data(flags.data, flags.format.value_or("csv"),
                                   model.dimension());
  if (model.scaling) d = apply_scaling(d, *model.scaling);
  const Vector f = decision_values(model, d.features);

  const fs::path out_dir = flags.out.value_or(".");
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "predictions.csv");
  out << "index,decision_value,label\n" << std::setprecision(17);
  for (Index i = 0; i < f.size(); ++i)
    out << i << ',' << f[i] << ',' << (f[i] >= 0.0 ? 1 : -1) << '\n';
  if (d.has_labels())
    std::cout << "accuracy: " << std::setprecision(6) << accuracy(model, d) << '\n';
  std::cout << "predictions: " << (out_dir / "predictions.csv").string() << '\n';
  return kExitOk;
}

int cmd_cv(const RunConfig& cfg) {
  const Dataset d = load_training_data(cfg);
  const auto cache = GramCache::from_environment();
  const auto plan = stratified_kfold(d, cfg.folds, cfg.seed);
  const CvReport r =
      cross_validate(d, cfg.kernel, cfg.solver, plan, eval_options(cfg, cache));
  emit_reports(cfg, {r}, Json{{"report", to_json(r)}});
  return kExitOk;
}

int cmd_grid(const RunConfig& cfg) {
  const Dataset d = load_training_data(cfg);
  const auto cache = GramCache::from_environment();
  const auto plan = stratified_kfold(d, cfg.folds, cfg.seed);
  const GridResult g = grid_search(d, cfg.kernel, cfg.grid, cfg.solver, plan,
                                   eval_options(cfg, cache));
  emit_reports(cfg, {g.best}, Json{{"result", to_json(g)}});
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg) {
  const Dataset d = load_training_data(cfg);
  const auto cache = GramCache::from_environment();
  const auto plan = stratified_kfold(d, cfg.folds, cfg.seed);
  const Comparison c = compare_linear_nonlinear(d, cfg.grid, cfg.solver, plan,
                                                eval_options(cfg, cache));
  emit_reports(cfg, {c.linear.best, c.gaussian.best},
               Json{{"linear", to_json(c.linear)},
                    {"gaussian", to_json(c.gaussian)}});
  return kExitOk;
}

int cmd_noise(const RunConfig& cfg) {
  const Dataset d = load_training_data(cfg);
  const auto cache = GramCache::from_environment();
  NoiseOptions noise;
  noise.fold_seed = cfg.seed;
  noise.noise_seed = cfg.noise_seed;
  noise.folds = cfg.folds;
  noise.retune = cfg.retune;
  const auto runs = noise_experiment(d, cfg.rates, cfg.kernel, cfg.grid,
                                     cfg.solver, noise, eval_options(cfg, cache));
  Json blocks = Json::array();
  std::vector<CvReport> best;
  for (const auto& run : runs) {
    blocks.push_back({{"rate", run.rate}, {"result", to_json(run.result)}});
    best.push_back(run.result.best);
  }
  emit_reports(cfg, best, Json{{"runs", std::move(blocks)}});
  return kExitOk;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--data", f.data, "data file");
  app->add_option("--format", f.format, "csv or libsvm");
  app->add_option("--kernel", f.kernel, "gaussian, poly, sigmoid or linear");
  app->add_option("--kernel-param", f.kernel_param,
                  "gaussian bandwidth, polynomial degree or sigmoid beta");
  app->add_option("--C", f.C, "loss penalty");
  app->add_option("--sigma-admm", f.sigma_admm,
                  "ADMM penalty (comma-separated list for grid commands)")
      ->delimiter(',');
  app->add_option("--eta", f.eta, "dual step size");
  app->add_option("--max-iter", f.max_iter, "iteration cap K");
  app->add_option("--tol", f.tol, "stopping tolerance");
  app->add_option("--folds", f.folds, "cross-validation folds");
  app->add_option("--seed", f.seed, "fold seed");
  app->add_option("--noise-seed", f.noise_seed, "label-noise seed");
  app->add_option("--grid-log2-range", f.grid_range, "lo:hi exponents of 2");
  app->add_option("--jobs", f.jobs, "worker threads");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--scaling", f.scaling, "train (fit per fold) or whole");
  app->add_flag("--include-gram-time", f.include_gram_time,
                "count Gram construction in mCPU");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zok: kernel SVM with 0/1 soft-margin loss"};
  app.require_subcommand(1);
  Flags flags;

  auto* train_cmd = app.add_subcommand("train", "train a model on a data file");
  add_common(train_cmd, flags);
  auto* predict_cmd = app.add_subcommand("predict", "score a data file");
  predict_cmd->add_option("--model", flags.model, "model.bin from train")->required();
  predict_cmd->add_option("--data", flags.data, "data file")->required();
  predict_cmd->add_option("--format", flags.format, "csv or libsvm");
  predict_cmd->add_option("--out", flags.out, "output directory");
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross validation");
  add_common(cv_cmd, flags);
  auto* grid_cmd = app.add_subcommand("grid", "grid search over C and kernel parameter");
  add_common(grid_cmd, flags);
  auto* compare_cmd = app.add_subcommand("compare", "linear vs gaussian kernel");
  add_common(compare_cmd, flags);
  auto* noise_cmd = app.add_subcommand("noise", "label-flip robustness runs");
  add_common(noise_cmd, flags);
  noise_cmd->add_option("--rates", flags.rates, "flip rates, comma-separated")
      ->delimiter(',');
  noise_cmd->add_flag("--reuse-clean-params", flags.reuse_clean_params,
                      "tune once on clean data instead of per rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*predict_cmd) return cmd_predict(flags);
    const RunConfig cfg = resolve(flags);
    if (*train_cmd) return cmd_train(cfg);
    if (*cv_cmd) return cmd_cv(cfg);
    if (*grid_cmd) return cmd_grid(cfg);
    if (*compare_cmd) return cmd_compare(cfg);
    if (*noise_cmd) return cmd_noise(cfg);
  } catch (const std::exception& e) {
    std::cerr << "zok: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
