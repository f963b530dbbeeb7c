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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gmmee/errors.hpp"
#include "gmmee/tsga.hpp"

namespace gmmee::tsga {
namespace {

double sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rastrigin(const std::vector<double>& x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

TsgaConfig box(int population, int iters, double half_width, std::uint64_t seed) {
  TsgaConfig cfg;
  cfg.population = population;
  cfg.max_iter = iters;
  cfg.bounds.assign(4, Bound{-half_width, half_width, false});
  cfg.rng_seed = seed;
  return cfg;
}

Individual ind(std::vector<double> p) { return Individual{std::move(p), 0.0}; }

TEST(Bound, LogScaleRoundTrip) {
  const Bound b{1e-4, 1e2, true};
  EXPECT_DOUBLE_EQ(b.search_lo(), -4.0);
  EXPECT_DOUBLE_EQ(b.search_hi(), 2.0);
  EXPECT_NEAR(b.from_search(b.to_search(0.37)), 0.37, 1e-15);
  EXPECT_DOUBLE_EQ(b.clamp(5.0), 2.0);
}

TEST(InitPopulation, WithinBoundsAndCentred) {
  TsgaConfig cfg = box(4000, 1, 5.0, 3);
  cfg.bounds[1] = Bound{1e-6, 1e-2, true};
  noise::Rng rng = noise::make_rng(3);
  const auto pop = init_population(cfg, rng);
  ASSERT_EQ(pop.size(), 4000u);
  std::vector<double> mean(4, 0.0);
  for (const auto& p : pop) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_GE(p.position[j], cfg.bounds[j].search_lo());
      EXPECT_LE(p.position[j], cfg.bounds[j].search_hi());
      mean[j] += p.position[j] / 4000.0;
    }
  }
  // Uniform on an interval of width W: standard error of the mean is W/sqrt(12·n).
  EXPECT_NEAR(mean[0], 0.0, 4.0 * 10.0 / std::sqrt(12.0 * 4000.0));
  EXPECT_NEAR(mean[1], -4.0, 4.0 * 4.0 / std::sqrt(12.0 * 4000.0));
}

TEST(InitPopulation, DegenerateBoundIsPinned) {
  TsgaConfig cfg = box(10, 1, 5.0, 4);
  cfg.bounds[2] = Bound{1.5, 1.5, false};
  noise::Rng rng = noise::make_rng(4);
  for (const auto& p : init_population(cfg, rng)) EXPECT_EQ(p.position[2], 1.5);
}

TEST(TsaSeedDim, Examples) {
  const Bound wide{-10.0, 10.0, false};
  const auto cur = ind({0.5});
  EXPECT_DOUBLE_EQ(tsa_seed_dim(cur, ind({3.0}), ind({-2.0}), 0, 1.0, 0.0, wide), 0.5);
  EXPECT_DOUBLE_EQ(tsa_seed_dim(cur, ind({3.0}), ind({3.0}), 0, 0.7, 0.9, wide), 0.35);
  EXPECT_DOUBLE_EQ(tsa_seed_dim(cur, ind({1.0}), ind({0.0}), 0, 0.9, 1.0, wide), 1.45);
  EXPECT_DOUBLE_EQ(tsa_seed_dim(cur, ind({1.0}), ind({0.0}), 0, 0.9, 1.0, Bound{0.0, 1.2, false}),
                   1.2);
}

TEST(TsaSeedDimExploratory, Examples) {
  const Bound wide{-10.0, 10.0, false};
  EXPECT_DOUBLE_EQ(tsa_seed_dim_exploratory(ind({2.0}), ind({2.0}), 0, 0.6, 0.8, wide), 1.2);
  EXPECT_DOUBLE_EQ(tsa_seed_dim_exploratory(ind({2.0}), ind({0.5}), 0, 1.0, 1.0, wide), 3.5);
}

TEST(TsaSeedDimExploratory, SpreadGrowsWithDistance) {
  const Bound wide{-100.0, 100.0, false};
  auto spread = [&](double peer) {
    noise::Rng rng = noise::make_rng(5);
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const double z = tsa_seed_dim_exploratory(ind({1.0}), ind({peer}), 0, 0.8, wide, rng);
      s += z;
      s2 += z * z;
    }
    return s2 / 20000.0 - (s / 20000.0) * (s / 20000.0);
  };
  const double near = spread(0.5), far = spread(-3.0);
  EXPECT_GT(far, near);
  // σ ~ U[−1, 1] has variance 1/3.
  EXPECT_NEAR(far, 16.0 / 3.0, 0.2);
}

TEST(GaOffspringDim, NoOperatorsCopiesCurrent) {
  TsgaConfig cfg = box(4, 1, 5.0, 1);
  cfg.crossover_rate = 0.0;
  cfg.mutation_rate = 0.0;
  noise::Rng rng = noise::make_rng(6);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(ga_offspring_dim(ind({1.25, 0, 0, 0}), ind({-3.0, 0, 0, 0}), 0, cfg, rng), 1.25);
  }
}

TEST(GaOffspringDim, CrossoverStaysBetweenParentsWithMidpointMean) {
  TsgaConfig cfg = box(4, 1, 5.0, 1);
  cfg.crossover_rate = 1.0;
  cfg.mutation_rate = 0.0;
  noise::Rng rng = noise::make_rng(7);
  double mean = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double c = ga_offspring_dim(ind({2.0, 0, 0, 0}), ind({-1.0, 0, 0, 0}), 0, cfg, rng);
    ASSERT_GE(c, -1.0);
    ASSERT_LE(c, 2.0);
    mean += c / 20000.0;
  }
  EXPECT_NEAR(mean, 0.5, 4.0 * 3.0 / std::sqrt(12.0 * 20000.0));
}

TEST(GaOffspringDim, MutationStddevMatchesRange) {
  TsgaConfig cfg = box(4, 1, 50.0, 1);
  cfg.crossover_rate = 0.0;
  cfg.mutation_rate = 1.0;
  cfg.mutation_sigma_frac = 0.1;
  noise::Rng rng = noise::make_rng(8);
  const int n = 20000;
  double s = 0.0, s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double c = ga_offspring_dim(ind({0.0, 0, 0, 0}), ind({7.0, 0, 0, 0}), 0, cfg, rng);
    s += c;
    s2 += c * c;
  }
  const double sd = std::sqrt(s2 / n - (s / n) * (s / n));
  // sd of a normal sample standard deviation ≈ σ/sqrt(2n).
  EXPECT_NEAR(sd, 10.0, 4.0 * 10.0 / std::sqrt(2.0 * n));
}

TEST(Optimize, SphereConverges) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = optimize(sphere, box(20, 100, 5.0, seed));
    EXPECT_LT(r.best.fitness, 1e-3) << "seed " << seed;
  }
}

TEST(Optimize, RastriginMostlyReachesBasin) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    hits += optimize(rastrigin, box(30, 200, 5.12, seed)).best.fitness < 1.0 ? 1 : 0;
  }
  EXPECT_GE(hits, 8);
}

TEST(Optimize, HistoryMonotoneAndElitist) {
  double seen = std::numeric_limits<double>::infinity();
  bool in_bounds = true;
  const auto cfg = box(12, 40, 3.0, 9);
  const auto r = optimize(
      [&](const std::vector<double>& x) {
        for (double v : x) in_bounds = in_bounds && v >= -3.0 && v <= 3.0;
        const double f = rastrigin(x);
        seen = std::min(seen, f);
        return f;
      },
      cfg);
  ASSERT_EQ(r.history.size(), 40u);
  for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1]);
  EXPECT_TRUE(in_bounds);
  EXPECT_EQ(r.best.fitness, seen);
  EXPECT_EQ(r.history.back(), seen);
  EXPECT_DOUBLE_EQ(rastrigin(r.best_natural), r.best.fitness);
}

TEST(Optimize, Deterministic) {
  const auto a = optimize(rastrigin, box(10, 30, 5.12, 11));
  const auto b = optimize(rastrigin, box(10, 30, 5.12, 11));
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.best.position, b.best.position);
}

TEST(Optimize, ParallelEvaluationMatchesSequential) {
  auto cfg = box(10, 30, 5.12, 12);
  const auto a = optimize(rastrigin, cfg);
  cfg.threads = 4;
  const auto b = optimize(rastrigin, cfg);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.counters.evaluations, b.counters.evaluations);
}

TEST(Optimize, OperatorCounters) {
  auto cfg = box(10, 20, 5.0, 13);
  cfg.st = 1.0;
  const auto pure = optimize(sphere, cfg);
  EXPECT_EQ(pure.counters.ga_calls, 0);
  EXPECT_EQ(pure.counters.exploratory_calls, 0);
  EXPECT_GT(pure.counters.tsa_calls, 0);

  cfg.st = 0.0;
  const auto ga = optimize(sphere, cfg);
  EXPECT_EQ(ga.counters.tsa_calls, 0);
  EXPECT_GT(ga.counters.ga_calls, 0);

  cfg.mode = SeedMode::classic;
  const auto classic = optimize(sphere, cfg);
  EXPECT_EQ(classic.counters.ga_calls, 0);
  EXPECT_GT(classic.counters.exploratory_calls, 0);
  // Every seed coordinate goes through exactly one operator.
  EXPECT_EQ(classic.counters.exploratory_calls, 4 * (classic.counters.evaluations - 10));
}

TEST(Optimize, SeedCountWithinBand) {
  auto cfg = box(20, 50, 5.0, 14);
  const auto r = optimize(sphere, cfg);
  const long seeds = r.counters.evaluations - 20;
  // Per tree per iteration the seed count lies in [2, 5].
  EXPECT_GE(seeds, 2L * 20 * 50);
  EXPECT_LE(seeds, 5L * 20 * 50);
}

TEST(Optimize, FitnessFailureCarriesPosition) {
  const auto cfg = box(5, 3, 5.0, 15);
  try {
    optimize([](const std::vector<double>& x) -> double {
      if (x[0] > 0.0) throw std::runtime_error("boom");
      return sphere(x);
    }, cfg);
    FAIL() << "expected FitnessFailure";
  } catch (const FitnessFailure& e) {
    ASSERT_EQ(e.position().size(), 4u);
    EXPECT_GT(e.position()[0], 0.0);
  }
  EXPECT_THROW(optimize([](const std::vector<double>&) { return std::nan(""); }, cfg),
               FitnessFailure);
}

TEST(TsgaConfig, ValidationAndInertia) {
  auto cfg = box(10, 5, 1.0, 1);
  EXPECT_DOUBLE_EQ(cfg.inertia(0), 0.9);
  EXPECT_DOUBLE_EQ(cfg.inertia(4), 0.4);
  cfg.population = 1;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.population = 10;
  cfg.st = 1.5;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.st = 0.5;
  cfg.bounds[0] = Bound{0.0, 1.0, true};
  EXPECT_THROW(cfg.validate(), DomainError);
}

}  // namespace
}  // namespace gmmee::tsga
