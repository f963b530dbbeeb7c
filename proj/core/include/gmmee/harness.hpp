// Copyright 2026 The gmmee-soc Authors
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
#include <string>
#include <vector>

#include "gmmee/config.hpp"
#include "gmmee/dataset.hpp"
#include "gmmee/filters.hpp"
#include "gmmee/tsga.hpp"

namespace gmmee::harness {

struct Timing {
  double max_ms = 0.0;
  double mean_ms = 0.0;
};

struct MetricsReport {
  std::string filter;
  double mae = 0.0;      // percentage points
  double mse = 0.0;      // percentage points squared
  double rmse = 0.0;     // percentage points
  double max_abs = 0.0;  // percentage points
  std::vector<double> t;
  std::vector<double> soc_true_pct;
  std::vector<double> soc_est_pct;
  std::vector<double> abs_err_pct;
  Timing timing;
  int iteration_cap_count = 0;
  int fallback_count = 0;
  int covariance_repaired_count = 0;
  std::uint64_t seed = 0;
};

/// Noise seed used by trial `k` of a run with master seed `master`.
std::uint64_t trial_seed(std::uint64_t master, int trial);

/// Synthesizes (or loads) the trace and truncates it at the SOC cutoff.
Dataset build_dataset(const ExperimentConfig& cfg, std::uint64_t noise_seed);

/// Runs the configured filter over an existing dataset.
MetricsReport run_on_dataset(const ExperimentConfig& cfg, const Dataset& data);

MetricsReport run_experiment(const ExperimentConfig& cfg);

/// One row per variant in `kinds`, all consuming the same noisy trace.
std::vector<MetricsReport> run_comparison(const ExperimentConfig& cfg,
                                          const std::vector<filters::FilterKind>& kinds);

struct Quantiles {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

Quantiles quantiles(std::vector<double> values);

struct MonteCarloSummary {
  std::string filter;
  std::vector<double> rmse;
  std::vector<std::uint64_t> seeds;
  std::vector<int> failed_trials;
  std::vector<std::string> failures;
  double mean = 0.0;
  double stddev = 0.0;
  Quantiles box;
  Timing timing;  // worst max and average mean across trials
};

MonteCarloSummary monte_carlo(const ExperimentConfig& cfg, int trials);

/// Mean RMSE of `cfg` over the given noise seeds, kernels replaced by
/// (α₁, α₂, β₁, β₂).
double kernel_fitness(const ExperimentConfig& cfg, const std::vector<double>& position,
                      const std::vector<std::uint64_t>& seeds);

struct TuneReport {
  tsga::Result search;
  filters::KernelParams best;
  double frozen_rmse = 0.0;
  MonteCarloSummary fresh;
  std::vector<std::uint64_t> frozen_seeds;
};

TuneReport tune_kernels(const ExperimentConfig& cfg);

struct RandomSearchResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  int evaluations = 0;
};

/// Uniform sampling (log-uniform for log bounds) with the same fitness.
RandomSearchResult random_search(const ExperimentConfig& cfg, const std::vector<tsga::Bound>& bounds,
                                 int budget, std::uint64_t seed,
                                 const std::vector<std::uint64_t>& frozen_seeds);

std::vector<std::uint64_t> frozen_seeds(std::uint64_t master, int count);

}  // namespace gmmee::harness
