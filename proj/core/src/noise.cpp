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

#include "gmmee/noise.hpp"

#include <cmath>

#include "gmmee/errors.hpp"

namespace gmmee::noise {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sample_gaussian(double mean, double variance, Rng& rng) {
  if (!(variance > 0.0)) throw DomainError("sample_gaussian: variance must be > 0");
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  return dist(rng);
}

double sample_laplace(double mean, double variance, Rng& rng) {
  if (!(variance > 0.0)) throw DomainError("sample_laplace: variance must be > 0");
  const double b = std::sqrt(variance / 2.0);
  // u on (−½, ½); the open interval keeps log1p finite.
  double u = uniform01(rng) - 0.5;
  while (u == -0.5) u = uniform01(rng) - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return mean - b * sign * std::log1p(-2.0 * std::abs(u));
}

double sample_uniform(double lo, double hi, Rng& rng) {
  if (!(lo < hi)) throw DomainError("sample_uniform: lo must be < hi");
  return lo + (hi - lo) * uniform01(rng);
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double sample(const Distribution& d, Rng& rng) {
  return std::visit(overloaded{
                        [&](const GaussianSpec& g) { return sample_gaussian(g.mean, g.var, rng); },
                        [&](const LaplaceSpec& l) { return sample_laplace(l.mean, l.var, rng); },
                        [&](const UniformSpec& u) { return sample_uniform(u.lo, u.hi, rng); },
                    },
                    d);
}

double mean(const Distribution& d) {
  return std::visit(overloaded{
                        [](const GaussianSpec& g) { return g.mean; },
                        [](const LaplaceSpec& l) { return l.mean; },
                        [](const UniformSpec& u) { return 0.5 * (u.lo + u.hi); },
                    },
                    d);
}

double variance(const Distribution& d) {
  return std::visit(overloaded{
                        [](const GaussianSpec& g) { return g.var; },
                        [](const LaplaceSpec& l) { return l.var; },
                        [](const UniformSpec& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12.0; },
                    },
                    d);
}

void validate(const Distribution& d) {
  std::visit(overloaded{
                 [](const GaussianSpec& g) {
                   if (!(g.var > 0.0)) throw DomainError("gaussian noise: var must be > 0");
                 },
                 [](const LaplaceSpec& l) {
                   if (!(l.var > 0.0)) throw DomainError("laplace noise: var must be > 0");
                 },
                 [](const UniformSpec& u) {
                   if (!(u.lo < u.hi)) throw DomainError("uniform noise: lo must be < hi");
                 },
             },
             d);
}

std::string name(const Distribution& d) {
  return std::visit(overloaded{
                        [](const GaussianSpec&) { return std::string("gaussian"); },
                        [](const LaplaceSpec&) { return std::string("laplace"); },
                        [](const UniformSpec&) { return std::string("uniform"); },
                    },
                    d);
}

void MixedNoiseSpec::validate() const {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("mixed noise: c must lie in [0, 1]");
  if (!(base.var > 0.0)) throw DomainError("mixed noise: base var must be > 0");
  if (!(scale > 0.0)) throw DomainError("mixed noise: scale must be > 0");
  noise::validate(contaminant);
}

double MixedNoiseSpec::mean() const {
  return scale * ((1.0 - c) * base.mean + c * noise::mean(contaminant));
}

double MixedNoiseSpec::variance() const {
  // Law of total variance over the Bernoulli gate.
  const double m0 = base.mean;
  const double m1 = noise::mean(contaminant);
  const double second = (1.0 - c) * (base.var + m0 * m0) +
                        c * (noise::variance(contaminant) + m1 * m1);
  const double m = (1.0 - c) * m0 + c * m1;
  return scale * scale * (second - m * m);
}

GatedSample sample_mixed_gated(const MixedNoiseSpec& spec, Rng& rng) {
  const bool hit = uniform01(rng) < spec.c;
  const double v = hit ? sample(spec.contaminant, rng)
                       : sample_gaussian(spec.base.mean, spec.base.var, rng);
  return {spec.scale * v, hit};
}

double sample_mixed(const MixedNoiseSpec& spec, Rng& rng) {
  return sample_mixed_gated(spec, rng).value;
}

}  // namespace gmmee::noise
