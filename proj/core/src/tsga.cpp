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

#include "gmmee/tsga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include "gmmee/errors.hpp"

namespace gmmee::tsga {

double Bound::to_search(double x) const { return log_scale ? std::log10(x) : x; }
double Bound::from_search(double u) const { return log_scale ? std::pow(10.0, u) : u; }
double Bound::search_lo() const { return to_search(lo); }
double Bound::search_hi() const { return to_search(hi); }
double Bound::clamp(double u) const { return std::clamp(u, search_lo(), search_hi()); }

void TsgaConfig::validate() const {
  if (population < 2) throw DomainError("TsgaConfig: population must be >= 2");
  if (max_iter < 1) throw DomainError("TsgaConfig: max_iter must be >= 1");
  if (!(st >= 0.0 && st <= 1.0)) throw DomainError("TsgaConfig: st must lie in [0, 1]");
  if (!(seed_frac_lo > 0.0 && seed_frac_lo <= seed_frac_hi && seed_frac_hi <= 1.0)) {
    throw DomainError("TsgaConfig: need 0 < seed_frac_lo <= seed_frac_hi <= 1");
  }
  if (bounds.empty()) throw DomainError("TsgaConfig: bounds are empty");
  for (const auto& b : bounds) {
    if (!(b.lo <= b.hi)) throw DomainError("TsgaConfig: bound lo must not exceed hi");
    if (b.log_scale && !(b.lo > 0.0)) throw DomainError("TsgaConfig: log bounds must be positive");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) ||
      !(mutation_rate >= 0.0 && mutation_rate <= 1.0) || !(mutation_sigma_frac >= 0.0)) {
    throw DomainError("TsgaConfig: GA rates must lie in [0, 1]");
  }
  if (threads < 1) throw DomainError("TsgaConfig: threads must be >= 1");
}

double TsgaConfig::inertia(int iteration) const {
  if (max_iter <= 1) return w_start;
  return w_start + (w_end - w_start) * static_cast<double>(iteration) / (max_iter - 1);
}

std::vector<Bound> kernel_bounds(double alpha_lo, double alpha_hi, double beta_lo,
                                 double beta_hi) {
  return {Bound{alpha_lo, alpha_hi, false}, Bound{alpha_lo, alpha_hi, false},
          Bound{beta_lo, beta_hi, true}, Bound{beta_lo, beta_hi, true}};
}

std::vector<double> to_natural(const std::vector<double>& search, const std::vector<Bound>& b) {
  std::vector<double> out(search.size());
  for (std::size_t j = 0; j < search.size(); ++j) out[j] = b[j].from_search(search[j]);
  return out;
}

std::vector<Individual> init_population(const TsgaConfig& cfg, noise::Rng& rng) {
  cfg.validate();
  std::vector<Individual> pop(static_cast<std::size_t>(cfg.population));
  for (auto& ind : pop) {
    ind.position.resize(cfg.bounds.size());
    for (std::size_t j = 0; j < cfg.bounds.size(); ++j) {
      const auto& b = cfg.bounds[j];
      const double lo = b.search_lo();
      ind.position[j] = b.clamp(lo + noise::uniform01(rng) * (b.search_hi() - lo));
    }
  }
  return pop;
}

namespace {

double draw_sigma(noise::Rng& rng) { return 2.0 * noise::uniform01(rng) - 1.0; }

}  // namespace

double tsa_seed_dim(const Individual& current, const Individual& best, const Individual& peer,
                    std::size_t j, double w, double sigma, const Bound& bound) {
  return bound.clamp(w * current.position[j] + sigma * (best.position[j] - peer.position[j]));
}

double tsa_seed_dim(const Individual& current, const Individual& best, const Individual& peer,
                    std::size_t j, double w, const Bound& bound, noise::Rng& rng) {
  return tsa_seed_dim(current, best, peer, j, w, draw_sigma(rng), bound);
}

double tsa_seed_dim_exploratory(const Individual& current, const Individual& peer, std::size_t j,
                                double w, double sigma, const Bound& bound) {
  return bound.clamp(w * current.position[j] +
                     sigma * (current.position[j] - peer.position[j]));
}

double tsa_seed_dim_exploratory(const Individual& current, const Individual& peer, std::size_t j,
                                double w, const Bound& bound, noise::Rng& rng) {
  return tsa_seed_dim_exploratory(current, peer, j, w, draw_sigma(rng), bound);
}

double ga_offspring_dim(const Individual& current, const Individual& peer, std::size_t j,
                        const TsgaConfig& cfg, noise::Rng& rng) {
  const Bound& b = cfg.bounds[j];
  double child = current.position[j];
  if (noise::uniform01(rng) < cfg.crossover_rate) {
    const double u = noise::uniform01(rng);
    child = u * current.position[j] + (1.0 - u) * peer.position[j];
  }
  if (noise::uniform01(rng) < cfg.mutation_rate) {
    const double sd = cfg.mutation_sigma_frac * (b.search_hi() - b.search_lo());
    if (sd > 0.0) child += noise::sample_gaussian(0.0, sd * sd, rng);
  }
  return b.clamp(child);
}

namespace {

std::string describe(const std::vector<double>& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

double evaluate(const Fitness& fitness, const std::vector<double>& natural) {
  double f = 0.0;
  try {
    f = fitness(natural);
  } catch (const std::exception& ex) {
    throw FitnessFailure("fitness failed at " + describe(natural) + ": " + ex.what(), natural);
  }
  if (std::isnan(f)) throw FitnessFailure("fitness returned NaN at " + describe(natural), natural);
  return f;
}

void evaluate_all(const Fitness& fitness, std::vector<Individual>& inds, const TsgaConfig& cfg,
                  Counters& counters) {
  const std::size_t count = inds.size();
  counters.evaluations += static_cast<long>(count);
  if (cfg.threads <= 1 || count <= 1) {
    for (auto& ind : inds) ind.fitness = evaluate(fitness, to_natural(ind.position, cfg.bounds));
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), count);
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < count; k += workers) {
        inds[k].fitness = evaluate(fitness, to_natural(inds[k].position, cfg.bounds));
      }
    }));
  }
  for (auto& job : jobs) job.get();
}

std::size_t argmin(const std::vector<Individual>& inds) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < inds.size(); ++k) {
    if (inds[k].fitness < inds[best].fitness) best = k;
  }
  return best;
}

}  // namespace

Result optimize(const Fitness& fitness, const TsgaConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  noise::Rng rng = noise::make_rng(cfg.rng_seed);
  Result result;
  std::vector<Individual> trees = init_population(cfg, rng);
  evaluate_all(fitness, trees, cfg, result.counters);
  Individual best = trees[argmin(trees)];

  const auto n = static_cast<std::size_t>(cfg.population);
  const std::size_t dims = cfg.bounds.size();
  const auto seeds_lo = std::max<long>(1, static_cast<long>(std::ceil(cfg.seed_frac_lo * cfg.population - 1e-12)));
  const auto seeds_hi = std::max<long>(seeds_lo, static_cast<long>(std::ceil(cfg.seed_frac_hi * cfg.population - 1e-12)));
  std::uniform_int_distribution<long> seed_count(seeds_lo, seeds_hi);
  std::uniform_int_distribution<std::size_t> other(0, n - 2);

  result.history.reserve(static_cast<std::size_t>(cfg.max_iter));
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const double w = cfg.inertia(iter);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Individual> seeds(static_cast<std::size_t>(seed_count(rng)));
      for (auto& seed : seeds) {
        std::size_t r = other(rng);
        if (r >= i) ++r;
        const Individual& peer = trees[r];
        seed.position.resize(dims);
        for (std::size_t j = 0; j < dims; ++j) {
          const Bound& b = cfg.bounds[j];
          if (noise::uniform01(rng) < cfg.st) {
            seed.position[j] = tsa_seed_dim(trees[i], best, peer, j, w, b, rng);
            ++result.counters.tsa_calls;
          } else if (cfg.mode == SeedMode::hybrid) {
            seed.position[j] = ga_offspring_dim(trees[i], peer, j, cfg, rng);
            ++result.counters.ga_calls;
          } else {
            seed.position[j] = tsa_seed_dim_exploratory(trees[i], peer, j, w, b, rng);
            ++result.counters.exploratory_calls;
          }
        }
      }
      evaluate_all(fitness, seeds, cfg, result.counters);
      const Individual& top = seeds[argmin(seeds)];
      if (top.fitness < trees[i].fitness) trees[i] = top;
    }
    const Individual& leader = trees[argmin(trees)];
    if (leader.fitness < best.fitness) best = leader;
    result.history.push_back(best.fitness);
  }

  result.best = best;
  result.best_natural = to_natural(best.position, cfg.bounds);
  result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace gmmee::tsga
