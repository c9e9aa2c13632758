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

// Acceptance checks. One line per criterion on stdout, exit status 1 if any
// criterion fails. Tolerances and the frozen hyperparameters live below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "zok/data.hpp"
#include "zok/eval.hpp"
#include "zok/oracle.hpp"
#include "zok/prox.hpp"
#include "zok/solver.hpp"

using namespace zok;

namespace {

constexpr double kSolverTol = 1e-3;
constexpr double kMarginTol = 1e-2;
constexpr double kDegeneracyTol = 1e-10;
constexpr double kGapTol = 0.10;
constexpr double kAccTol = 0.02;
constexpr double kNsvFactor = 2.0;
constexpr double kCvSeconds = 60.0;
constexpr std::uint64_t kFoldSeed = 0;
constexpr std::uint64_t kNoiseSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Runs that feed the stationarity and margin checks.
struct Run {
  Dataset train;  // already scaled
  KernelSpec spec;
  SolverConfig cfg;
  TrainResult result;
};
std::vector<Run> corpus;

void keep(const Dataset& d, const KernelSpec& spec, const SolverConfig& cfg,
          const TrainResult& r) {
  if (r.certificate.converged) corpus.push_back({d, spec, cfg, r});
}

Outcome prox_oracle() {
  Outcome out;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> zd(-3.0, 3.0), gcd(0.01, 4.0),
      gd(0.05, 2.0);
  int checked = 0, matched = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 10000; ++i) {
    const double z = zd(rng), gc = gcd(rng), gamma = gd(rng);
    const double C = gc / gamma;
    const ProxParams p(gamma, C);
    const double got = prox_l01_scalar(z, p);
    if (std::abs(z - p.threshold) <= 1e-4) continue;
    ++checked;
    const double want = oracle::prox_grid_argmin(z, gamma, C, 1e-4);
    if (std::abs(got - want) <= 1e-4) ++matched;
  }
  const double elapsed = seconds_since(t0);
  out.require(matched == checked,
              fmt("%.0f/%.0f outside the tie band match the grid", matched,
                  checked));
  out.require(elapsed < 1.0, fmt("%.3f s (limit 1 s)", elapsed));
  return out;
}

Outcome global_gap() {
  Outcome out;
  std::mt19937_64 rng(2);
  const double c_values[] = {0.5, 1.0, 4.0};
  const auto spec = KernelSpec::gaussian(0.5);
  int close = 0, converged = 0, stationary = 0;
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 25; ++i) {
    const Dataset d = zok::testing::random_dataset(4 + i % 5, 2, rng);
    SolverConfig cfg;
    cfg.C = c_values[i % 3];
    const GramMatrix g = sign_gram(gram_matrix(d, spec), d.labels);
    const auto best = oracle::global_bruteforce(g, cfg.C);
    const auto r = train(d, spec, cfg);
    const double got =
        oracle::objective(r.state.alpha, r.state.u, g, cfg.C).total;
    const double gap = (got - best.value.total) / best.value.total;
    worst = std::max(worst, gap);
    if (gap <= kGapTol) ++close;
    if (r.certificate.converged) {
      ++converged;
      if (check_pstationary(r.state.alpha, r.state.u, g, cfg.gamma(), cfg.C,
                            kSolverTol))
        ++stationary;
    }
    keep(d, spec, cfg, r);
  }
  const double elapsed = seconds_since(t0);
  out.require(close >= 20, fmt("%.0f/25 within 10%% (worst gap %.3f)", close,
                               worst));
  out.require(stationary == converged,
              fmt("%.0f/%.0f converged runs P-stationary", stationary,
                  converged));
  out.require(elapsed < 60.0, fmt("%.2f s (limit 60 s)", elapsed));
  return out;
}

// Random low-dimensional sets in a regime where the solver settles with SVs.
void random_corpus() {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 60; ++i) {
    const Dataset d = zok::testing::random_dataset(15 + i, 2, rng);
    SolverConfig cfg;
    cfg.C = i % 3 == 0 ? 4.0 : 16.0;
    cfg.sigma_admm = i % 2 ? 16.0 : 4.0;
    const auto spec = KernelSpec::gaussian(0.25);
    keep(d, spec, cfg, train(d, spec, cfg));
  }
}

Outcome stationarity() {
  Outcome out;
  int bad_theta = 0, bad_sign = 0;
  for (const Run& run : corpus) {
    const auto& c = run.result.certificate;
    if (!(std::max(c.theta1, c.theta2) < kSolverTol)) ++bad_theta;
    if (!run.result.model.sign_pattern_holds(kSolverTol)) ++bad_sign;
  }
  out.require(!corpus.empty(), fmt("%.0f converged runs", corpus.size()));
  out.require(bad_theta == 0, fmt("%.0f with max(theta) >= tol", bad_theta));
  out.require(bad_sign == 0, fmt("%.0f break the sign pattern", bad_sign));
  return out;
}

Outcome margins() {
  Outcome out;
  Index svs = 0, bad = 0;
  double worst = 0.0;
  for (const Run& run : corpus) {
    const TrainedModel& m = run.result.model;
    const Vector f = decision_values(m, run.train.features);
    for (Index i : m.sv_indices) {
      const double dev = std::abs(run.train.labels[i] * f[i] - 1.0);
      worst = std::max(worst, dev);
      ++svs;
      if (dev > kMarginTol) ++bad;
    }
  }
  out.require(svs > 0, fmt("%.0f SVs over %.0f converged models", svs,
                           corpus.size()));
  out.require(bad == 0, fmt("%.0f off the margin (worst %.2e)", bad, worst));
  return out;
}

Outcome degeneracy() {
  Outcome out;
  std::mt19937_64 rng(5);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Dataset d =
        zok::testing::random_dataset(5 + i % 40, 1 + i % 9, rng);
    const Vector a = zok::testing::random_matrix(d.rows(), 1, rng, -2.0, 2.0);
    const auto [lhs, rhs] =
        oracle::degeneracy_check(d, KernelSpec::linear(), a);
    const double err = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
    worst = std::max(worst, err);
    if (err > kDegeneracyTol) ++bad;
  }
  out.require(bad == 0, fmt("%.0f/100 violate (worst relative %.2e)", bad,
                            worst));
  return out;
}

struct Target {
  const char* name;
  double acc;
  double nsv;  // <= 0 when no nsv target
  double C, bandwidth, sigma_admm;
};

// Hyperparameters frozen from offline grid searches (see README).
const Target kTargets[] = {
    {"bre", 0.9677, 9.82, 1.0, 1.0, 1.0},
    {"ech", 0.9186, 7.76, 1.0, 1.0, 1.0},
    {"hea", 0.8374, 0.0, 1.0, 2.0, 0.25},
    {"mon", 0.9723, 78.73, 4.0, 1.0, 4.0},
    {"wdb", 0.9744, 11.73, 1.0, 1.0, 1.0},
};

std::string data_file(const char* name) {
  return zok::testing::data_dir() + "/" + name + ".csv";
}

// Trains each fold once more to add the models to the corpus.
void add_folds(const Dataset& d, const KernelSpec& spec,
               const SolverConfig& cfg, const FoldPlan& plan) {
  for (int f = 0; f < plan.fold_count; ++f) {
    Dataset tr = d.subset(plan.train_indices(f));
    if (tr.count(1.0) == 0 || tr.count(-1.0) == 0) continue;
    tr = apply_scaling(tr, fit_scaling(tr));
    keep(tr, spec, cfg, train(tr, spec, cfg));
  }
}

Outcome table() {
  Outcome out;
  for (const Target& t : kTargets) {
    const std::string path = data_file(t.name);
    if (!std::filesystem::exists(path)) {
      out.require(false, std::string(t.name) + " dataset not present");
      continue;
    }
    Dataset d = load_csv(path);
    d.name = t.name;
    SolverConfig cfg;
    cfg.C = t.C;
    cfg.sigma_admm = t.sigma_admm;
    const auto spec = KernelSpec::gaussian(t.bandwidth);
    const FoldPlan plan = stratified_kfold(d, 10, kFoldSeed);
    const auto t0 = Clock::now();
    const CvReport r = cross_validate(d, spec, cfg, plan);
    const double elapsed = seconds_since(t0);
    out.require(std::abs(r.mean_acc - t.acc) <= kAccTol,
                std::string(t.name) +
                    fmt(" acc %.4f (target %.4f)", r.mean_acc, t.acc));
    if (t.nsv > 0)
      out.require(r.mean_nsv <= kNsvFactor * t.nsv &&
                      r.mean_nsv >= t.nsv / kNsvFactor,
                  std::string(t.name) +
                      fmt(" nsv %.2f (target %.2f)", r.mean_nsv, t.nsv));
    out.require(elapsed < kCvSeconds,
                std::string(t.name) + fmt(" %.1f s", elapsed));
    add_folds(d, spec, cfg, plan);
  }
  return out;
}

Outcome nonlinear_gap() {
  Outcome out;
  const std::string path = data_file("mon");
  if (!std::filesystem::exists(path)) {
    out.require(false, "mon dataset not present");
    return out;
  }
  Dataset d = load_csv(path);
  d.name = "mon";
  const FoldPlan plan = stratified_kfold(d, 10, kFoldSeed);
  SolverConfig cfg;
  cfg.C = 4.0;
  cfg.sigma_admm = 4.0;
  const CvReport gauss =
      cross_validate(d, KernelSpec::gaussian(1.0), cfg, plan);
  // The linear kernel gets its own C grid.
  const GridSpec grid = GridSpec::log2_range(-8, 8, {0.25, 1.0, 4.0});
  const GridResult lin =
      grid_search(d, KernelSpec::linear(), grid, SolverConfig{}, plan);
  out.require(gauss.mean_acc >= 0.95,
              fmt("gaussian acc %.4f (need >= 0.95)", gauss.mean_acc));
  out.require(lin.best.mean_acc <= 0.80,
              fmt("linear acc %.4f at C=%g (need <= 0.80)",
                  lin.best.mean_acc, lin.best.best_params.C));
  return out;
}

// The noise protocol leaves open whether parameters are retuned per rate,
// so both modes are run and either may satisfy the criterion.
Outcome noise() {
  Outcome out;
  const std::string path = data_file("bre");
  if (!std::filesystem::exists(path)) {
    out.require(false, "bre dataset not present");
    return out;
  }
  Dataset d = load_csv(path);
  d.name = "bre";
  const GridSpec grid = GridSpec::log2_range(-4, 4, {1.0});
  bool any = false;
  for (const bool retune : {true, false}) {
    NoiseOptions opts;
    opts.fold_seed = kFoldSeed;
    opts.noise_seed = kNoiseSeed;
    opts.retune = retune;
    const auto runs = noise_experiment(
        d, {0.05, 0.10}, KernelSpec::gaussian(1.0), grid, SolverConfig{}, opts);
    const CvReport& r5 = runs[0].result.best;
    const CvReport& r10 = runs[1].result.best;
    const bool acc_ok = std::abs(r10.mean_acc - 0.8952) <= kAccTol;
    const bool nsv_ok = r10.mean_nsv < 2.0 * r5.mean_nsv;
    any = any || (acc_ok && nsv_ok);
    const std::string mode = retune ? "retuned: " : "clean params: ";
    out.detail += (out.detail.empty() ? "" : "; ") + mode +
                  (acc_ok ? "" : "FAILED ") +
                  fmt("r=10%% acc %.4f (target 0.8952), ", r10.mean_acc) +
                  (nsv_ok ? "" : "FAILED ") +
                  fmt("nsv %.2f -> %.2f (r=5%% -> 10%%)", r5.mean_nsv,
                      r10.mean_nsv);
  }
  out.pass = any;
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> order = {
      {1, prox_oracle}, {2, global_gap}, {6, table},  {7, nonlinear_gap},
      {8, noise},       {5, degeneracy},
  };
  Outcome results[9];
  for (const auto& [id, fn] : order) {
    const auto t0 = Clock::now();
    try {
      results[id] = fn();
    } catch (const std::exception& e) {
      results[id].require(false, std::string("exception: ") + e.what());
    }
    std::fprintf(stderr, "criterion %d evaluated in %.1f s\n", id,
                 seconds_since(t0));
  }
  // The corpus is complete once the data-driven criteria have run.
  random_corpus();
  results[3] = stationarity();
  results[4] = margins();

  bool all = true;
  for (int id = 1; id <= 8; ++id) {
    all = all && results[id].pass;
    std::printf("criterion %d: %s  %s\n", id,
                results[id].pass ? "PASS" : "FAIL",
                results[id].detail.c_str());
  }
  return all ? 0 : 1;
}
