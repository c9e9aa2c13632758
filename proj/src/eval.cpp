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

#include "zok/eval.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <thread>

namespace zok {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Runs task(0..count-1) on up to `jobs` threads; rethrows the first error.
template <typename Task>
void parallel_for(std::size_t count, int jobs, const Task& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct PreparedFold {
  Dataset train;
  Dataset test;
  GramMatrix gram;
  double gram_seconds = 0.0;
  bool skipped = false;
};

std::vector<PreparedFold> prepare_folds(const Dataset& d,
                                        const KernelSpec& spec,
                                        const FoldPlan& plan,
                                        const EvalOptions& options) {
  if (static_cast<Index>(plan.assignments.size()) != d.rows())
    throw ArgumentError("fold plan does not match the dataset");
  std::optional<ScalingMap> whole;
  if (options.scaling == ScalingMode::whole_dataset) whole = fit_scaling(d);

  std::vector<PreparedFold> folds(static_cast<std::size_t>(plan.fold_count));
  parallel_for(folds.size(), options.jobs, [&](std::size_t f) {
    auto& fold = folds[f];
    fold.train = d.subset(plan.train_indices(static_cast<int>(f)));
    fold.test = d.subset(plan.test_indices(static_cast<int>(f)));
    if (fold.train.rows() < 2 || fold.train.count(1.0) == 0 ||
        fold.train.count(-1.0) == 0 || fold.test.rows() == 0) {
      fold.skipped = true;
      return;
    }
    const ScalingMap map = whole ? *whole : fit_scaling(fold.train);
    fold.train = apply_scaling(fold.train, map);
    fold.test = apply_scaling(fold.test, map);
    const auto start = Clock::now();
    fold.gram = options.cache ? options.cache->get_or_compute(fold.train.features, spec)
                              : gram_matrix(fold.train, spec);
    fold.gram_seconds = seconds_since(start);
  });
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (folds[f].skipped)
      std::cerr << "warning: " << d.name << " fold " << f
                << " skipped (single-class training split)\n";
  return folds;
}

FoldResult run_fold(const PreparedFold& fold, int index,
                    const KernelSpec& spec, const SolverConfig& cfg,
                    const EvalOptions& options) {
  FoldResult out;
  out.fold = index;
  if (fold.skipped) {
    out.skipped = true;
    return out;
  }
  const auto start = Clock::now();
  const TrainResult trained = train(fold.train, spec, cfg, &fold.gram);
  out.metrics.cpu_seconds =
      seconds_since(start) + (options.include_gram_time ? fold.gram_seconds : 0.0);
  out.metrics.acc = accuracy(trained.model, fold.test);
  out.metrics.nsv = trained.model.sv_count();
  out.certificate = trained.certificate;
  return out;
}

CvReport make_report(const Dataset& d, const KernelSpec& spec,
                     const SolverConfig& cfg, std::vector<FoldResult> folds) {
  CvReport report;
  report.dataset = d.name;
  report.spec = spec;
  report.config = cfg;
  report.per_fold = std::move(folds);
  report.best_params = {cfg.C, spec.parameter(), cfg.sigma_admm};
  report.aggregate();
  return report;
}

}  // namespace

GridSpec GridSpec::log2_range(int lo, int hi, std::vector<double> sigma_admm) {
  if (lo > hi) throw ArgumentError("log2 range must have lo <= hi");
  GridSpec g;
  for (int e = lo; e <= hi; ++e) {
    g.c_values.push_back(std::ldexp(1.0, e));
    g.kernel_param_values.push_back(std::ldexp(1.0, e));
  }
  g.sigma_admm_values = std::move(sigma_admm);
  return g;
}

void GridSpec::validate() const {
  for (const auto* list : {&c_values, &kernel_param_values, &sigma_admm_values}) {
    if (list->empty()) throw ArgumentError("grid lists must be nonempty");
    for (const double v : *list)
      if (!(v > 0.0)) throw ArgumentError("grid values must be positive");
  }
}

void CvReport::aggregate() {
  double acc = 0.0, nsv = 0.0, cpu = 0.0;
  std::size_t used = 0;
  for (const auto& f : per_fold) {
    if (f.skipped) continue;
    acc += f.metrics.acc;
    nsv += static_cast<double>(f.metrics.nsv);
    cpu += f.metrics.cpu_seconds;
    ++used;
  }
  const double n = used ? static_cast<double>(used) : 1.0;
  mean_acc = acc / n;
  mean_nsv = nsv / n;
  mean_cpu = cpu / n;
}

CvReport cross_validate(const Dataset& d, const KernelSpec& spec,
                        const SolverConfig& cfg, const FoldPlan& plan,
                        const EvalOptions& options) {
  d.validate();
  cfg.validate();
  const auto folds = prepare_folds(d, spec, plan, options);
  std::vector<FoldResult> results(folds.size());
  parallel_for(folds.size(), options.jobs, [&](std::size_t f) {
    results[f] = run_fold(folds[f], static_cast<int>(f), spec, cfg, options);
  });
  return make_report(d, spec, cfg, std::move(results));
}

bool better_report(const CvReport& a, const CvReport& b) {
  if (a.mean_acc != b.mean_acc) return a.mean_acc > b.mean_acc;
  if (a.mean_nsv != b.mean_nsv) return a.mean_nsv < b.mean_nsv;
  return a.best_params.C < b.best_params.C;
}

GridResult grid_search(const Dataset& d, const KernelSpec& family,
                       const GridSpec& grid, const SolverConfig& cfg,
                       const FoldPlan& plan, const EvalOptions& options) {
  d.validate();
  grid.validate();
  const std::vector<double> params =
      family.family == KernelFamily::linear
          ? std::vector<double>{0.0}
          : grid.kernel_param_values;

  GridResult out;
  for (const double param : params) {
    const KernelSpec spec = family.family == KernelFamily::linear
                                ? family
                                : family.with_parameter(param);
    const auto folds = prepare_folds(d, spec, plan, options);

    std::vector<SolverConfig> cells;
    for (const double c : grid.c_values)
      for (const double s : grid.sigma_admm_values) {
        SolverConfig cell = cfg;
        cell.C = c;
        cell.sigma_admm = s;
        cells.push_back(cell);
      }
    const std::size_t per_cell = folds.size();
    std::vector<FoldResult> results(cells.size() * per_cell);
    parallel_for(results.size(), options.jobs, [&](std::size_t t) {
      const std::size_t cell = t / per_cell, f = t % per_cell;
      results[t] = run_fold(folds[f], static_cast<int>(f), spec, cells[cell],
                            options);
    });
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
      std::vector<FoldResult> mine(results.begin() + cell * per_cell,
                                   results.begin() + (cell + 1) * per_cell);
      out.all.push_back(make_report(d, spec, cells[cell], std::move(mine)));
    }
  }
  out.best = out.all.front();
  for (const auto& r : out.all)
    if (better_report(r, out.best)) out.best = r;
  return out;
}

Comparison compare_linear_nonlinear(const Dataset& d, const GridSpec& grid,
                                    const SolverConfig& cfg,
                                    const FoldPlan& plan,
                                    const EvalOptions& options) {
  Comparison out;
  out.linear = grid_search(d, KernelSpec::linear(), grid, cfg, plan, options);
  out.gaussian =
      grid_search(d, KernelSpec::gaussian(1.0), grid, cfg, plan, options);
  return out;
}

std::vector<NoiseRun> noise_experiment(const Dataset& d,
                                       const std::vector<double>& rates,
                                       const KernelSpec& family,
                                       const GridSpec& grid,
                                       const SolverConfig& cfg,
                                       const NoiseOptions& noise,
                                       const EvalOptions& options) {
  for (const double r : rates)
    if (!(r >= 0.0 && r < 0.5))
      throw ArgumentError("noise rates must lie in [0, 0.5)");

  std::optional<CvReport> clean_best;
  if (!noise.retune) {
    const auto plan = stratified_kfold(d, noise.folds, noise.fold_seed);
    clean_best = grid_search(d, family, grid, cfg, plan, options).best;
  }

  std::vector<NoiseRun> runs;
  for (const double rate : rates) {
    const Dataset noisy =
        rate == 0.0 ? d : flip_labels(d, NoiseSpec{rate, noise.noise_seed, true});
    const auto plan = stratified_kfold(noisy, noise.folds, noise.fold_seed);
    NoiseRun run;
    run.rate = rate;
    if (noise.retune) {
      run.result = grid_search(noisy, family, grid, cfg, plan, options);
    } else {
      SolverConfig fixed = cfg;
      fixed.C = clean_best->best_params.C;
      fixed.sigma_admm = clean_best->best_params.sigma_admm;
      run.result.best =
          cross_validate(noisy, clean_best->spec, fixed, plan, options);
      run.result.all = {run.result.best};
    }
    run.result.best.noise_rate = rate;
    for (auto& r : run.result.all) r.noise_rate = rate;
    runs.push_back(std::move(run));
  }
  return runs;
}

Json to_json(const CvReport& report) {
  Json folds = Json::array();
  for (const auto& f : report.per_fold) {
    Json row{{"fold", f.fold}, {"skipped", f.skipped}};
    if (!f.skipped) {
      row["acc"] = f.metrics.acc;
      row["nsv"] = f.metrics.nsv;
      row["cpu_seconds"] = f.metrics.cpu_seconds;
      row["certificate"] = to_json(f.certificate);
    }
    folds.push_back(std::move(row));
  }
  Json j{{"dataset", report.dataset},
         {"kernel", to_json(report.spec)},
         {"config", to_json(report.config)},
         {"per_fold", std::move(folds)},
         {"mean_acc", report.mean_acc},
         {"mean_nsv", report.mean_nsv},
         {"mean_cpu", report.mean_cpu},
         {"best_params",
          {{"C", report.best_params.C},
           {"kernel_param", report.best_params.kernel_param},
           {"sigma_admm", report.best_params.sigma_admm}}}};
  j["noise_rate"] = report.noise_rate ? Json(*report.noise_rate) : Json();
  return j;
}

Json to_json(const GridResult& result) {
  Json cells = Json::array();
  for (const auto& r : result.all)
    cells.push_back({{"C", r.best_params.C},
                     {"kernel_param", r.best_params.kernel_param},
                     {"sigma_admm", r.best_params.sigma_admm},
                     {"mean_acc", r.mean_acc},
                     {"mean_nsv", r.mean_nsv},
                     {"mean_cpu", r.mean_cpu}});
  return Json{{"best", to_json(result.best)}, {"grid", std::move(cells)}};
}

void write_csv_header(std::ostream& out) {
  out << "dataset,kernel,kernel_param,C,sigma_admm,noise_rate,fold,skipped,"
         "acc,nsv,converged,iterations,theta1,theta2\n";
}

void write_csv_rows(std::ostream& out, const CvReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(10);
  for (const auto& f : report.per_fold) {
    out << report.dataset << ',' << to_string(report.spec.family) << ','
        << report.best_params.kernel_param << ',' << report.best_params.C
        << ',' << report.best_params.sigma_admm << ','
        << report.noise_rate.value_or(0.0) << ',' << f.fold << ','
        << (f.skipped ? 1 : 0) << ',';
    if (f.skipped) {
      out << ",,,,,\n";
      continue;
    }
    out << f.metrics.acc << ',' << f.metrics.nsv << ','
        << (f.certificate.converged ? 1 : 0) << ','
        << f.certificate.iterations_used << ',' << f.certificate.theta1 << ','
        << f.certificate.theta2 << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace zok
