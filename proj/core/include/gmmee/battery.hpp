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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmmee/dataset.hpp"
#include "gmmee/noise.hpp"
#include "gmmee/numerics.hpp"

namespace gmmee::battery {

/// Second-order RC equivalent-circuit parameters. Capacity is stored in
/// coulombs; use from_amp_hours() at the boundary.
struct EcmParams {
  double r0 = 0.0;      // Ω
  double r1 = 0.0;      // Ω
  double c1 = 0.0;      // F
  double r2 = 0.0;      // Ω
  double c2 = 0.0;      // F
  double q_max = 0.0;   // C
  double lambda = 1.0;  // coulomb efficiency

  static double from_amp_hours(double ah) { return ah * 3600.0; }

  /// Throws DomainError when any invariant is violated.
  void validate() const;
};

/// Sixth-order polynomial open-circuit voltage, coefficients in ascending
/// powers of SOC (fraction).
class OcvCurve {
 public:
  static constexpr std::size_t kCoefficients = 7;

  OcvCurve(std::array<double, kCoefficients> coeffs, double soc_min = 0.0, double soc_max = 1.0);

  const std::array<double, kCoefficients>& coeffs() const { return coeffs_; }
  double soc_min() const { return soc_min_; }
  double soc_max() const { return soc_max_; }
  /// False when the curve decreases anywhere on [soc_min, soc_max] at 1e-3
  /// resolution. Non-monotone curves are accepted but flagged.
  bool monotone() const { return monotone_; }

  double operator()(double soc) const;
  double slope(double soc) const;

 private:
  std::array<double, kCoefficients> coeffs_;
  double soc_min_;
  double soc_max_;
  bool monotone_;
};

struct BatteryState {
  double soc = 1.0;  // fraction
  double u1 = 0.0;   // V
  double u2 = 0.0;   // V
  bool clamped = false;

  Vector to_vector() const;
  static BatteryState from_vector(const Vector& x);
};

/// Exact zero-order-hold discretization of the RC dynamics plus coulomb
/// counting. Discharge current is positive. No clamping and no noise.
Vector transition(const Vector& x, double current, double dt, const EcmParams& p);

/// Same as transition() on a BatteryState; SOC is clamped to [0, 1] and the
/// clamp is recorded in the result.
BatteryState state_transition(const BatteryState& s, double current, double dt,
                              const EcmParams& p);

double ocv_eval(const OcvCurve& curve, double soc);

/// U_L = OCV(soc) − I·R₀ − U₁ − U₂.
double measure_voltage(const BatteryState& s, double current, const EcmParams& p,
                       const OcvCurve& ocv);
double measure_voltage(const Vector& x, double current, const EcmParams& p, const OcvCurve& ocv);

struct OcvFit {
  OcvCurve curve;
  double rmse;         // V
  double condition;    // 2-norm condition estimate of the Vandermonde matrix
};

inline constexpr double kMaxVandermondeCondition = 1e12;

/// Least-squares polynomial fit of (soc, voltage) pairs. Only order 6 yields
/// an OcvCurve directly; lower orders are zero-padded.
OcvFit fit_ocv(std::span<const std::pair<double, double>> points, int order = 6);

struct CoulombTrace {
  std::vector<double> soc;
  bool out_of_range = false;
};

/// soc_k = soc0 − (λ·dt/Q)·Σ_{i<k} I_i, so soc_0 = soc0 and the trace has
/// currents.size() + 1 entries.
CoulombTrace coulomb_count(double soc0, std::span<const double> currents, double dt,
                           const EcmParams& p);

enum class ProfileKind { constant, pulse, urban_like, highway_like };

ProfileKind profile_kind_from_string(const std::string& s);
std::string to_string(ProfileKind kind);

struct ProfileOptions {
  double duty = 0.5;          // pulse: discharge fraction of each period
  double period_s = 60.0;     // pulse period
  double ceiling_factor = 3;  // |I| ≤ ceiling_factor·amplitude for random profiles
};

/// Synthetic load current, deterministic per seed.
std::vector<double> generate_current_profile(ProfileKind kind, double duration, double dt,
                                             double amplitude, std::uint64_t seed,
                                             const ProfileOptions& opts = {});

/// Rolls the model forward with additive process noise w ~ N(0, Q) and
/// measurement noise drawn from `meas_noise`. Process and measurement noise
/// use independent substreams of `rng_seed`, so the run is bit-reproducible.
/// A zero Q disables process noise.
Dataset simulate_trace(const EcmParams& p, const OcvCurve& ocv, std::span<const double> currents,
                       double dt, double soc0, const Matrix& process_noise_cov,
                       const noise::MixedNoiseSpec& meas_noise, std::uint64_t rng_seed);

}  // namespace gmmee::battery
