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
#include <functional>
#include <vector>

#include "gmmee/noise.hpp"

namespace gmmee::tsga {

// Search interval for one dimension. Log-scaled dimensions are searched in
// log10 coordinates; every operator below works in those coordinates.
struct Bound {
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;

  double to_search(double x) const;
  double from_search(double u) const;
  double search_lo() const;
  double search_hi() const;
  double clamp(double u) const;
};

enum class SeedMode {
  hybrid,   // GA crossover/mutation replaces the exploratory seed rule
  classic,  // original tree-seed rule on both branches
};

struct TsgaConfig {
  int population = 20;
  int max_iter = 100;
  double st = 0.6;
  double w_start = 0.9;
  double w_end = 0.4;
  double seed_frac_lo = 0.10;
  double seed_frac_hi = 0.25;
  std::vector<Bound> bounds;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  double mutation_sigma_frac = 0.1;
  std::uint64_t rng_seed = 1;
  SeedMode mode = SeedMode::hybrid;
  int threads = 1;

  void validate() const;
  double inertia(int iteration) const;
};

// Default kernel search space for (α₁, α₂, β₁, β₂).
std::vector<Bound> kernel_bounds(double alpha_lo = 1.2, double alpha_hi = 6.0,
                                 double beta_lo = 1e-6, double beta_hi = 1e-2);

// Positions are stored in search coordinates.
struct Individual {
  std::vector<double> position;
  double fitness = 0.0;
};

// Fitness receives natural (not log) coordinates.
using Fitness = std::function<double(const std::vector<double>&)>;

std::vector<double> to_natural(const std::vector<double>& search, const std::vector<Bound>& b);

std::vector<Individual> init_population(const TsgaConfig& cfg, noise::Rng& rng);

double tsa_seed_dim(const Individual& current, const Individual& best, const Individual& peer,
                    std::size_t j, double w, double sigma, const Bound& bound);
double tsa_seed_dim(const Individual& current, const Individual& best, const Individual& peer,
                    std::size_t j, double w, const Bound& bound, noise::Rng& rng);

double tsa_seed_dim_exploratory(const Individual& current, const Individual& peer, std::size_t j,
                                double w, double sigma, const Bound& bound);
double tsa_seed_dim_exploratory(const Individual& current, const Individual& peer, std::size_t j,
                                double w, const Bound& bound, noise::Rng& rng);

double ga_offspring_dim(const Individual& current, const Individual& peer, std::size_t j,
                        const TsgaConfig& cfg, noise::Rng& rng);

struct Counters {
  long tsa_calls = 0;
  long exploratory_calls = 0;
  long ga_calls = 0;
  long evaluations = 0;
};

struct Result {
  Individual best;                    // search coordinates
  std::vector<double> best_natural;   // natural coordinates
  std::vector<double> history;        // best fitness after each iteration
  Counters counters;
  double wall_s = 0.0;
};

Result optimize(const Fitness& fitness, const TsgaConfig& cfg);

}  // namespace gmmee::tsga
