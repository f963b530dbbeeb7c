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
#include <random>
#include <string>
#include <variant>

namespace gmmee::noise {

/// Generator used for every stochastic stream in the library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; maps (master seed, stream index) to an independent
/// seed so Monte Carlo trials get reproducible, non-overlapping substreams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed) { return Rng(derive_seed(seed, 0)); }

/// Uniform draw on [0, 1) with 53 random bits.
double uniform01(Rng& rng);

struct GaussianSpec {
  double mean = 0.0;
  double var = 1.0;
};
struct LaplaceSpec {
  double mean = 0.0;
  double var = 1.0;
};
struct UniformSpec {
  double lo = 0.0;
  double hi = 1.0;
};

using Distribution = std::variant<GaussianSpec, LaplaceSpec, UniformSpec>;

/// Bernoulli-gated two-component noise ρ = (1 − γ)·base + γ·contaminant with
/// P{γ = 1} = c. Every sample is multiplied by `scale` (1 for volts, 1e-3 when
/// the parameters are given in millivolts).
struct MixedNoiseSpec {
  double c = 0.0;
  GaussianSpec base;
  Distribution contaminant = GaussianSpec{};
  double scale = 1.0;

  void validate() const;
  double mean() const;
  double variance() const;
};

double sample_gaussian(double mean, double variance, Rng& rng);
/// Inverse-CDF Laplace draw with scale b = √(variance / 2).
double sample_laplace(double mean, double variance, Rng& rng);
double sample_uniform(double lo, double hi, Rng& rng);

double sample(const Distribution& d, Rng& rng);
double mean(const Distribution& d);
double variance(const Distribution& d);
void validate(const Distribution& d);
std::string name(const Distribution& d);

double sample_mixed(const MixedNoiseSpec& spec, Rng& rng);

/// sample_mixed that also reports whether the contaminant was drawn.
struct GatedSample {
  double value;
  bool contaminant;
};
GatedSample sample_mixed_gated(const MixedNoiseSpec& spec, Rng& rng);

}  // namespace gmmee::noise
