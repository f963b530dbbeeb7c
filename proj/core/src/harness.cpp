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

#include "gmmee/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "gmmee/errors.hpp"

namespace gmmee::harness {

namespace {

Matrix diag3(const std::vector<double>& d) {
  Matrix m = Matrix::Zero(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

// Runs `job(k)` for k in [0, count) on up to `threads` workers.
template <typename Job>
void parallel_for(int count, int threads, const Job& job) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int k = 0; k < count; ++k) job(k);
    return;
  }
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int k = w; k < count; k += workers) job(k);
    }));
  }
  for (auto& j : jobs) j.get();
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return noise::derive_seed(master, 1000 + static_cast<std::uint64_t>(trial));
}

std::vector<std::uint64_t> frozen_seeds(std::uint64_t master, int count) {
  std::vector<std::uint64_t> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(noise::derive_seed(master, 500000 + static_cast<std::uint64_t>(k)));
  }
  return out;
}

Dataset build_dataset(const ExperimentConfig& cfg, std::uint64_t noise_seed) {
  Dataset data;
  if (cfg.trace.source == "csv") {
    data = load_dataset_csv(cfg.trace.csv_path);
  } else {
    const auto currents = battery::generate_current_profile(
        cfg.trace.profile, cfg.trace.duration_s, cfg.trace.dt, cfg.trace.amplitude_a,
        cfg.trace.profile_seed);
    data = battery::simulate_trace(cfg.params, cfg.ocv(), currents, cfg.trace.dt, cfg.trace.soc0,
                                   diag3(cfg.truth_q_diag), cfg.noise, noise_seed);
    data.meta.temperature_label = cfg.trace.temperature_label;
  }
  if (data.has_soc_true() && cfg.soc_cutoff > 0.0) data = data.truncated_at_soc(cfg.soc_cutoff);
  data.validate();
  return data;
}

MetricsReport run_on_dataset(const ExperimentConfig& cfg, const Dataset& data) {
  if (!data.has_soc_true()) {
    throw DataError("dataset has no soc_true column; SOC error metrics are unavailable");
  }
  const std::size_t n = data.size();
  const double dt = data.meta.dt;
  Matrix r(1, 1);
  r(0, 0) = cfg.filter_r();
  const auto model = filters::battery_model(cfg.params, cfg.ocv(), diag3(cfg.q_diag), r);

  Vector x0(3);
  x0(0) = cfg.init_soc ? *cfg.init_soc : data.soc_true.front();
  x0(1) = data.u1_true.empty() ? 0.0 : data.u1_true.front();
  x0(2) = data.u2_true.empty() ? 0.0 : data.u2_true.front();
  filters::Filter filter(model, cfg.filter, filters::initial_state(x0, diag3(cfg.p0_diag)));

  MetricsReport rep;
  rep.filter = filters::to_string(cfg.filter.kind);
  rep.seed = data.meta.seed;
  const auto warm = static_cast<std::size_t>(cfg.warmup);
  if (warm >= n) throw ConfigError("experiment.warmup leaves no samples to score");

  double total_ms = 0.0;
  std::size_t timed = 0;
  double soc_est = x0(0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const filters::StepInput in{data.current[k - 1], data.current[k], dt};
      Vector y(1);
      y(0) = data.voltage[k];
      const auto start = std::chrono::steady_clock::now();
      const auto& st = filter.step(in, y);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      total_ms += ms;
      ++timed;
      rep.timing.max_ms = std::max(rep.timing.max_ms, ms);
      soc_est = st.x_hat(0);
      if (!std::isfinite(soc_est)) throw NonFinite("filter produced a non-finite SOC estimate");
      rep.iteration_cap_count += st.diagnostics.iteration_cap ? 1 : 0;
      rep.fallback_count += st.diagnostics.fallback ? 1 : 0;
      rep.covariance_repaired_count += st.diagnostics.covariance_repaired ? 1 : 0;
    }
    if (k < warm) continue;
    const double truth = 100.0 * data.soc_true[k];
    const double est = 100.0 * soc_est;
    rep.t.push_back(data.t[k]);
    rep.soc_true_pct.push_back(truth);
    rep.soc_est_pct.push_back(est);
    rep.abs_err_pct.push_back(std::abs(est - truth));
  }
  rep.timing.mean_ms = timed ? total_ms / static_cast<double>(timed) : 0.0;

  const auto count = static_cast<double>(rep.abs_err_pct.size());
  double sum = 0.0;
  double sq = 0.0;
  for (double e : rep.abs_err_pct) {
    sum += e;
    sq += e * e;
    rep.max_abs = std::max(rep.max_abs, e);
  }
  rep.mae = sum / count;
  rep.mse = sq / count;
  rep.rmse = std::sqrt(rep.mse);
  return rep;
}

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_on_dataset(cfg, build_dataset(cfg, cfg.seed));
}

std::vector<MetricsReport> run_comparison(const ExperimentConfig& cfg,
                                          const std::vector<filters::FilterKind>& kinds) {
  cfg.validate();
  const Dataset data = build_dataset(cfg, cfg.seed);
  std::vector<MetricsReport> rows(kinds.size());
  parallel_for(static_cast<int>(kinds.size()), cfg.threads, [&](int k) {
    ExperimentConfig row = cfg;
    row.filter.kind = kinds[static_cast<std::size_t>(k)];
    rows[static_cast<std::size_t>(k)] = run_on_dataset(row, data);
  });
  return rows;
}

Quantiles quantiles(std::vector<double> v) {
  if (v.empty()) throw EmptyInput("quantiles: empty input");
  std::sort(v.begin(), v.end());
  const auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return Quantiles{v.front(), at(0.25), at(0.5), at(0.75), v.back()};
}

MonteCarloSummary monte_carlo(const ExperimentConfig& cfg, int trials) {
  cfg.validate();
  if (trials < 1) throw ConfigError("monte_carlo: trials must be >= 1");
  const auto count = static_cast<std::size_t>(trials);
  std::vector<double> rmse(count, 0.0);
  std::vector<Timing> timing(count);
  std::vector<std::string> errors(count);
  std::vector<char> failed(count, 0);
  MonteCarloSummary s;
  s.filter = filters::to_string(cfg.filter.kind);
  for (int k = 0; k < trials; ++k) s.seeds.push_back(trial_seed(cfg.seed, k));

  parallel_for(trials, cfg.threads, [&](int k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const auto rep = run_on_dataset(cfg, build_dataset(cfg, s.seeds[i]));
      rmse[i] = rep.rmse;
      timing[i] = rep.timing;
    } catch (const NumericError& ex) {
      failed[i] = 1;
      errors[i] = ex.what();
    }
  });

  double mean_ms = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (failed[i]) {
      s.failed_trials.push_back(static_cast<int>(i));
      s.failures.push_back(errors[i]);
      continue;
    }
    s.rmse.push_back(rmse[i]);
    s.timing.max_ms = std::max(s.timing.max_ms, timing[i].max_ms);
    mean_ms += timing[i].mean_ms;
  }
  if (s.rmse.empty()) throw NumericBreakdown("monte_carlo: every trial failed");
  const auto ok = static_cast<double>(s.rmse.size());
  s.timing.mean_ms = mean_ms / ok;
  s.mean = std::accumulate(s.rmse.begin(), s.rmse.end(), 0.0) / ok;
  double var = 0.0;
  for (double r : s.rmse) var += (r - s.mean) * (r - s.mean);
  s.stddev = s.rmse.size() > 1 ? std::sqrt(var / (ok - 1.0)) : 0.0;
  s.box = quantiles(s.rmse);
  return s;
}

namespace {

ExperimentConfig with_kernels(const ExperimentConfig& cfg, const std::vector<double>& pos) {
  if (pos.size() != 4) throw DomainError("kernel position must hold (alpha1, alpha2, beta1, beta2)");
  ExperimentConfig c = cfg;
  c.filter.kernels.alpha1 = pos[0];
  c.filter.kernels.alpha2 = pos[1];
  c.filter.kernels.beta1 = pos[2];
  c.filter.kernels.beta2 = pos[3];
  return c;
}

double mean_rmse(const ExperimentConfig& cfg, const std::vector<double>& pos,
                 const std::vector<Dataset>& data) {
  const ExperimentConfig c = with_kernels(cfg, pos);
  double sum = 0.0;
  for (const auto& d : data) sum += run_on_dataset(c, d).rmse;
  return sum / static_cast<double>(data.size());
}

std::vector<Dataset> build_all(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  std::vector<Dataset> out;
  out.reserve(seeds.size());
  for (auto s : seeds) out.push_back(build_dataset(cfg, s));
  return out;
}

}  // namespace

double kernel_fitness(const ExperimentConfig& cfg, const std::vector<double>& position,
                      const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw EmptyInput("kernel_fitness: no seeds");
  return mean_rmse(cfg, position, build_all(cfg, seeds));
}

TuneReport tune_kernels(const ExperimentConfig& cfg) {
  cfg.validate();
  using filters::FilterKind;
  const auto kind = cfg.filter.kind;
  if (kind != FilterKind::gmmee_srckf && kind != FilterKind::gmee_ckf &&
      kind != FilterKind::mmee_ckf && kind != FilterKind::mee_ckf) {
    throw ConfigError("tune: the filter variant must be an entropy-criterion variant");
  }
  TuneReport rep;
  rep.frozen_seeds = frozen_seeds(cfg.seed, cfg.tune.frozen_trials);
  const auto data = build_all(cfg, rep.frozen_seeds);
  rep.search = tsga::optimize([&](const std::vector<double>& pos) { return mean_rmse(cfg, pos, data); },
                              cfg.tune.tsga);
  const auto& best = rep.search.best_natural;
  rep.best = cfg.filter.kernels;
  rep.best.alpha1 = best[0];
  rep.best.alpha2 = best[1];
  rep.best.beta1 = best[2];
  rep.best.beta2 = best[3];
  rep.frozen_rmse = rep.search.best.fitness;
  rep.fresh = monte_carlo(with_kernels(cfg, best), cfg.tune.fresh_trials);
  return rep;
}

RandomSearchResult random_search(const ExperimentConfig& cfg, const std::vector<tsga::Bound>& bounds,
                                 int budget, std::uint64_t seed,
                                 const std::vector<std::uint64_t>& seeds) {
  if (budget < 1) throw DomainError("random_search: budget must be >= 1");
  const auto data = build_all(cfg, seeds);
  noise::Rng rng = noise::make_rng(seed);
  RandomSearchResult out;
  out.best_fitness = std::numeric_limits<double>::infinity();
  for (int k = 0; k < budget; ++k) {
    std::vector<double> pos(bounds.size());
    for (std::size_t j = 0; j < bounds.size(); ++j) {
      const auto& b = bounds[j];
      pos[j] = b.from_search(b.search_lo() + noise::uniform01(rng) * (b.search_hi() - b.search_lo()));
    }
    const double f = mean_rmse(cfg, pos, data);
    ++out.evaluations;
    if (f < out.best_fitness) {
      out.best_fitness = f;
      out.best_position = pos;
    }
  }
  return out;
}

}  // namespace gmmee::harness
