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

#include "gmmee/battery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gmmee/errors.hpp"

namespace gmmee::battery {

void EcmParams::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(r0) || !positive(r1) || !positive(r2)) {
    throw DomainError("EcmParams: resistances must be > 0");
  }
  if (!positive(c1) || !positive(c2)) throw DomainError("EcmParams: capacitances must be > 0");
  if (!positive(q_max)) throw DomainError("EcmParams: q_max must be > 0");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("EcmParams: lambda must lie in (0, 1]");
  if (!positive(r1 * c1) || !positive(r2 * c2)) {
    throw DomainError("EcmParams: RC time constants must be > 0");
  }
}

OcvCurve::OcvCurve(std::array<double, kCoefficients> coeffs, double soc_min, double soc_max)
    : coeffs_(coeffs), soc_min_(soc_min), soc_max_(soc_max), monotone_(true) {
  if (!(soc_min >= 0.0 && soc_max <= 1.0 && soc_min < soc_max)) {
    throw DomainError("OcvCurve: validity range must satisfy 0 <= soc_min < soc_max <= 1");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("OcvCurve: non-finite coefficient");
  }
  double prev = (*this)(soc_min_);
  for (double s = soc_min_ + 1e-3; s <= soc_max_ + 1e-12; s += 1e-3) {
    const double v = (*this)(std::min(s, soc_max_));
    if (v < prev) {
      monotone_ = false;
      break;
    }
    prev = v;
  }
}

double OcvCurve::operator()(double soc) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * soc + *it;
  return acc;
}

double OcvCurve::slope(double soc) const {
  double acc = 0.0;
  for (std::size_t k = kCoefficients - 1; k >= 1; --k) {
    acc = acc * soc + static_cast<double>(k) * coeffs_[k];
  }
  return acc;
}

Vector BatteryState::to_vector() const { return Vector{{soc, u1, u2}}; }

BatteryState BatteryState::from_vector(const Vector& x) {
  if (x.size() != 3) throw DomainError("BatteryState: expected a 3-vector");
  return BatteryState{x(0), x(1), x(2), false};
}

Vector transition(const Vector& x, double current, double dt, const EcmParams& p) {
  const double a1 = std::exp(-dt / (p.r1 * p.c1));
  const double a2 = std::exp(-dt / (p.r2 * p.c2));
  Vector out(3);
  out(0) = x(0) - p.lambda * dt * current / p.q_max;
  out(1) = a1 * x(1) + p.r1 * (1.0 - a1) * current;
  out(2) = a2 * x(2) + p.r2 * (1.0 - a2) * current;
  return out;
}

BatteryState state_transition(const BatteryState& s, double current, double dt,
                              const EcmParams& p) {
  if (!(dt > 0.0)) throw DomainError("state_transition: dt must be > 0");
  const Vector next = transition(s.to_vector(), current, dt, p);
  if (!next.allFinite()) throw NonFinite("state_transition: non-finite state");
  BatteryState out = BatteryState::from_vector(next);
  if (out.soc < 0.0 || out.soc > 1.0) {
    out.soc = std::clamp(out.soc, 0.0, 1.0);
    out.clamped = true;
  }
  return out;
}

double ocv_eval(const OcvCurve& curve, double soc) { return curve(soc); }

double measure_voltage(const Vector& x, double current, const EcmParams& p, const OcvCurve& ocv) {
  return ocv(x(0)) - current * p.r0 - x(1) - x(2);
}

double measure_voltage(const BatteryState& s, double current, const EcmParams& p,
                       const OcvCurve& ocv) {
  return ocv(s.soc) - current * p.r0 - s.u1 - s.u2;
}

OcvFit fit_ocv(std::span<const std::pair<double, double>> points, int order) {
  if (order < 1 || order > 6) throw DomainError("fit_ocv: order must lie in [1, 6]");
  const auto cols = static_cast<Eigen::Index>(order + 1);
  if (static_cast<Eigen::Index>(points.size()) < cols) {
    throw DomainError("fit_ocv: need at least order + 1 points");
  }
  std::set<double> distinct;
  double lo = points.front().first;
  double hi = lo;
  for (const auto& [s, v] : points) {
    if (!std::isfinite(s) || !std::isfinite(v)) throw DomainError("fit_ocv: non-finite point");
    distinct.insert(s);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (static_cast<Eigen::Index>(distinct.size()) < cols) {
    throw DomainError("fit_ocv: need at least order + 1 distinct soc values");
  }
  if (hi - lo < 0.3) throw DomainError("fit_ocv: soc values must span at least 0.3");

  const auto rows = static_cast<Eigen::Index>(points.size());
  Matrix vander(rows, cols);
  Vector volts(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double pw = 1.0;
    for (Eigen::Index k = 0; k < cols; ++k) {
      vander(i, k) = pw;
      pw *= points[static_cast<std::size_t>(i)].first;
    }
    volts(i) = points[static_cast<std::size_t>(i)].second;
  }
  Eigen::JacobiSVD<Matrix> svd(vander);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond <= kMaxVandermondeCondition)) {
    throw IllConditioned("fit_ocv: Vandermonde condition estimate exceeds 1e12");
  }
  const Vector coef = vander.colPivHouseholderQr().solve(volts);
  const double rmse = std::sqrt((vander * coef - volts).squaredNorm() / static_cast<double>(rows));

  std::array<double, OcvCurve::kCoefficients> c{};
  for (Eigen::Index k = 0; k < cols; ++k) c[static_cast<std::size_t>(k)] = coef(k);
  return OcvFit{OcvCurve(c, std::max(0.0, lo), std::min(1.0, hi)), rmse, cond};
}

CoulombTrace coulomb_count(double soc0, std::span<const double> currents, double dt,
                           const EcmParams& p) {
  if (!(dt > 0.0)) throw DomainError("coulomb_count: dt must be > 0");
  CoulombTrace out;
  out.soc.reserve(currents.size() + 1);
  const double k = p.lambda * dt / p.q_max;
  double charge = 0.0;
  out.soc.push_back(soc0);
  for (double i : currents) {
    charge += i;
    out.soc.push_back(soc0 - k * charge);
  }
  for (double s : out.soc) {
    if (s < 0.0 || s > 1.0) out.out_of_range = true;
  }
  return out;
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "constant") return ProfileKind::constant;
  if (s == "pulse") return ProfileKind::pulse;
  if (s == "urban_like") return ProfileKind::urban_like;
  if (s == "highway_like") return ProfileKind::highway_like;
  throw DomainError("unknown current profile kind: " + s);
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::pulse: return "pulse";
    case ProfileKind::urban_like: return "urban_like";
    case ProfileKind::highway_like: return "highway_like";
  }
  return "unknown";
}

namespace {

// Piecewise-constant targets with random dwell, smoothed by a first-order lag.
struct SegmentModel {
  double min_len_s;
  double max_len_s;
  double rest_prob;
  double regen_prob;
  double lo_gain;
  double hi_gain;
  double time_constant_s;
};

std::vector<double> segment_profile(const SegmentModel& m, std::size_t n, double dt,
                                    double amplitude, double ceiling, noise::Rng& rng) {
  std::vector<double> out(n);
  double target = 0.0;
  double level = 0.0;
  double remaining = 0.0;
  const double blend = 1.0 - std::exp(-dt / m.time_constant_s);
  for (std::size_t i = 0; i < n; ++i) {
    if (remaining <= 0.0) {
      remaining = m.min_len_s + (m.max_len_s - m.min_len_s) * noise::uniform01(rng);
      const double u = noise::uniform01(rng);
      const double gain = m.lo_gain + (m.hi_gain - m.lo_gain) * noise::uniform01(rng);
      if (u < m.rest_prob) {
        target = 0.0;
      } else if (u < m.rest_prob + m.regen_prob) {
        target = -0.5 * gain * amplitude;
      } else {
        target = gain * amplitude;
      }
    }
    remaining -= dt;
    level += blend * (target - level);
    out[i] = std::clamp(level, -ceiling, ceiling);
  }
  return out;
}

}  // namespace

std::vector<double> generate_current_profile(ProfileKind kind, double duration, double dt,
                                             double amplitude, std::uint64_t seed,
                                             const ProfileOptions& opts) {
  if (!(dt > 0.0)) throw DomainError("generate_current_profile: dt must be > 0");
  if (!(duration >= dt)) throw DomainError("generate_current_profile: duration must be >= dt");
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  const double ceiling = opts.ceiling_factor * std::abs(amplitude);
  noise::Rng rng = noise::make_rng(seed);
  switch (kind) {
    case ProfileKind::constant:
      return std::vector<double>(n, amplitude);
    case ProfileKind::pulse: {
      std::vector<double> out(n);
      const auto period = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opts.period_s / dt)));
      const auto on = static_cast<std::size_t>(std::llround(opts.duty * static_cast<double>(period)));
      for (std::size_t i = 0; i < n; ++i) out[i] = (i % period) < on ? amplitude : 0.0;
      return out;
    }
    case ProfileKind::urban_like:
      return segment_profile({5.0, 40.0, 0.3, 0.15, 0.2, 1.5, 3.0}, n, dt, amplitude, ceiling, rng);
    case ProfileKind::highway_like:
      return segment_profile({2.0, 12.0, 0.05, 0.1, 1.0, 3.0, 0.5}, n, dt, amplitude, ceiling, rng);
  }
  return {};
}

Dataset simulate_trace(const EcmParams& p, const OcvCurve& ocv, std::span<const double> currents,
                       double dt, double soc0, const Matrix& process_noise_cov,
                       const noise::MixedNoiseSpec& meas_noise, std::uint64_t rng_seed) {
  p.validate();
  meas_noise.validate();
  if (currents.empty()) throw DomainError("simulate_trace: empty current trace");
  if (!(dt > 0.0)) throw DomainError("simulate_trace: dt must be > 0");
  if (process_noise_cov.rows() != 3 || process_noise_cov.cols() != 3) {
    throw DomainError("simulate_trace: process noise covariance must be 3x3");
  }

  const bool with_process_noise = !process_noise_cov.isZero(0.0);
  Matrix q_factor;
  if (with_process_noise) q_factor = numerics::cholesky_lower(process_noise_cov).matrix();

  noise::Rng process_rng(noise::derive_seed(rng_seed, 1));
  noise::Rng meas_rng(noise::derive_seed(rng_seed, 2));

  const std::size_t n = currents.size();
  Dataset d;
  d.t.resize(n);
  d.current.assign(currents.begin(), currents.end());
  d.voltage.resize(n);
  d.soc_true.resize(n);
  d.u1_true.resize(n);
  d.u2_true.resize(n);
  d.meta = DatasetMeta{"synthetic", dt, "", rng_seed};

  BatteryState s{soc0, 0.0, 0.0, false};
  for (std::size_t k = 0; k < n; ++k) {
    d.t[k] = static_cast<double>(k) * dt;
    d.soc_true[k] = s.soc;
    d.u1_true[k] = s.u1;
    d.u2_true[k] = s.u2;
    d.voltage[k] = measure_voltage(s, currents[k], p, ocv) + noise::sample_mixed(meas_noise, meas_rng);

    BatteryState next = state_transition(s, currents[k], dt, p);
    if (with_process_noise) {
      Vector w(3);
      for (Eigen::Index i = 0; i < 3; ++i) w(i) = noise::sample_gaussian(0.0, 1.0, process_rng);
      const Vector x = next.to_vector() + q_factor * w;
      const bool was_clamped = next.clamped;
      next = BatteryState::from_vector(x);
      next.clamped = was_clamped;
      if (next.soc < 0.0 || next.soc > 1.0) {
        next.soc = std::clamp(next.soc, 0.0, 1.0);
        next.clamped = true;
      }
    }
    if (!std::isfinite(d.voltage[k])) throw NonFinite("simulate_trace: non-finite voltage");
    s = next;
  }
  return d;
}

}  // namespace gmmee::battery
