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

#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include "gmmee/battery.hpp"
#include "gmmee/errors.hpp"
#include "json.hpp"

namespace gmmee::battery {
namespace {

EcmParams reference_params() {
  return EcmParams{0.015, 0.01, 1000.0, 0.02, 5000.0, EcmParams::from_amp_hours(3.0), 1.0};
}

nlohmann::json load_fixture() {
  std::ifstream in(std::string(GMMEE_FIXTURE_DIR) + "/ocv_fit.json");
  return nlohmann::json::parse(in);
}

OcvCurve reference_curve() {
  const auto c = load_fixture().at("coefficients").get<std::vector<double>>();
  std::array<double, OcvCurve::kCoefficients> a{};
  std::copy(c.begin(), c.end(), a.begin());
  return OcvCurve(a);
}

double template_ocv(double s) { return 3.0 + 0.45 * (1.0 - std::exp(-15.0 * s)) + 0.75 * std::pow(s, 1.5); }

TEST(EcmParams, Validation) {
  EXPECT_NO_THROW(reference_params().validate());
  auto p = reference_params();
  p.r1 = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = reference_params();
  p.lambda = 1.2;
  EXPECT_THROW(p.validate(), DomainError);
  p = reference_params();
  p.q_max = -1.0;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(StateTransition, ZeroCurrentDecay) {
  const auto p = reference_params();
  const BatteryState s{0.6, 0.02, -0.01, false};
  const auto n = state_transition(s, 0.0, 2.0, p);
  EXPECT_EQ(n.soc, 0.6);
  EXPECT_NEAR(n.u1, 0.02 * std::exp(-2.0 / (p.r1 * p.c1)), 1e-17);
  EXPECT_NEAR(n.u2, -0.01 * std::exp(-2.0 / (p.r2 * p.c2)), 1e-17);
}

TEST(StateTransition, VanishingStepIsIdentity) {
  const BatteryState s{0.6, 0.02, -0.01, false};
  const auto n = state_transition(s, 2.5, 1e-12, reference_params());
  EXPECT_NEAR(n.soc, s.soc, 1e-15);
  EXPECT_NEAR(n.u1, s.u1, 1e-13);
  EXPECT_NEAR(n.u2, s.u2, 1e-13);
}

TEST(StateTransition, FullDischargeInOneHour) {
  auto p = reference_params();
  const double one_c = p.q_max / 3600.0;
  const Vector x = transition(BatteryState{1.0, 0, 0, false}.to_vector(), one_c, 3600.0, p);
  EXPECT_NEAR(x(0), 0.0, 1e-14);
  const auto clamped = state_transition(BatteryState{0.5, 0, 0, false}, one_c, 3600.0, p);
  EXPECT_EQ(clamped.soc, 0.0);
  EXPECT_TRUE(clamped.clamped);
}

TEST(StateTransition, RejectsNonPositiveStep) {
  EXPECT_THROW(state_transition(BatteryState{}, 1.0, 0.0, reference_params()), DomainError);
}

TEST(MeasureVoltage, OpenCircuitAndLinearityInR0) {
  const auto p = reference_params();
  const auto ocv = reference_curve();
  EXPECT_EQ(measure_voltage(BatteryState{0.42, 0, 0, false}, 0.0, p, ocv), ocv(0.42));
  auto p2 = p;
  p2.r0 = 2.0 * p.r0;
  const BatteryState s{0.7, 0.01, 0.003, false};
  const double i = 2.0;
  EXPECT_NEAR(measure_voltage(s, i, p, ocv) - measure_voltage(s, i, p2, ocv), i * p.r0, 1e-14);
}

TEST(MeasureVoltage, IndependentRecomputation) {
  const auto p = reference_params();
  const auto c = load_fixture().at("coefficients").get<std::vector<double>>();
  const BatteryState s{0.37, 0.012, 0.004, false};
  double ocv = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) ocv += c[k] * std::pow(0.37, static_cast<double>(k));
  const double expected = ocv - 1.5 * p.r0 - 0.012 - 0.004;
  EXPECT_NEAR(measure_voltage(s, 1.5, p, reference_curve()), expected, 1e-12);
  EXPECT_NEAR(ocv_eval(reference_curve(), 0.37), ocv, 1e-12);
}

TEST(OcvEval, ConstantAndLinear) {
  EXPECT_DOUBLE_EQ(ocv_eval(OcvCurve({3.2, 0, 0, 0, 0, 0, 0}), 0.9), 3.2);
  EXPECT_DOUBLE_EQ(ocv_eval(OcvCurve({3.0, 1.0, 0, 0, 0, 0, 0}), 0.5), 3.5);
}

TEST(OcvCurve, MonotonicityFlag) {
  EXPECT_TRUE(reference_curve().monotone());
  EXPECT_FALSE(OcvCurve({3.5, -1.0, 0, 0, 0, 0, 0}).monotone());
}

TEST(FitOcv, InterpolatesExactPolynomial) {
  const std::array<double, 7> truth{3.1, 0.8, -0.5, 0.9, -0.2, 0.1, 0.05};
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 7; ++k) {
    const double s = k / 6.0;
    double v = 0.0;
    for (int j = 6; j >= 0; --j) v = v * s + truth[static_cast<std::size_t>(j)];
    pts.emplace_back(s, v);
  }
  const auto fit = fit_ocv(pts);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(fit.curve.coeffs()[j], truth[j], 1e-8);
}

TEST(FitOcv, LinearDataGivesZeroHigherTerms) {
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k <= 20; ++k) pts.emplace_back(k / 20.0, 3.0 + 1.2 * (k / 20.0));
  const auto fit = fit_ocv(pts);
  EXPECT_NEAR(fit.curve.coeffs()[0], 3.0, 1e-8);
  EXPECT_NEAR(fit.curve.coeffs()[1], 1.2, 1e-8);
  for (std::size_t j = 2; j < 7; ++j) EXPECT_NEAR(fit.curve.coeffs()[j], 0.0, 1e-8);
}

TEST(FitOcv, NoisyPointsStayWithinFiveMillivolts) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 19; ++k) {
    const double s = 0.05 + 0.95 * k / 18.0;
    pts.emplace_back(s, template_ocv(s) + noise(rng));
  }
  const auto fit = fit_ocv(pts);
  for (double s = 0.1; s <= 1.0; s += 0.01) EXPECT_NEAR(fit.curve(s), template_ocv(s), 5e-3) << s;
}

TEST(FitOcv, MatchesNumpyReferenceFit) {
  const auto j = load_fixture();
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  const auto fit = fit_ocv(pts);
  const auto ref = reference_curve();
  for (double s = 0.0; s <= 1.0; s += 0.05) EXPECT_NEAR(fit.curve(s), ref(s), 1e-9) << s;
  EXPECT_NEAR(fit.rmse, j.at("rmse").get<double>(), 1e-9);
}

TEST(FitOcv, DegenerateInputsRejected) {
  std::vector<std::pair<double, double>> same(10, {0.5, 3.6});
  EXPECT_ANY_THROW(fit_ocv(same));
  std::vector<std::pair<double, double>> few{{0.1, 3.3}, {0.5, 3.6}};
  EXPECT_ANY_THROW(fit_ocv(few));
}

TEST(CoulombCount, ZeroAndConstantCurrent) {
  const auto p = reference_params();
  const std::vector<double> zero(100, 0.0);
  for (double s : coulomb_count(0.8, zero, 1.0, p).soc) EXPECT_EQ(s, 0.8);
  const std::vector<double> one_c(1800, p.q_max / 3600.0);
  const auto trace = coulomb_count(1.0, one_c, 1.0, p);
  EXPECT_NEAR(trace.soc.back(), 0.5, 1e-12);
  EXPECT_FALSE(trace.out_of_range);
}

TEST(CoulombCount, CloseToTrapezoidRule) {
  const auto p = reference_params();
  const double dt = 0.1;
  const auto currents = generate_current_profile(ProfileKind::urban_like, 600.0, dt, 3.0, 4);
  const auto trace = coulomb_count(1.0, currents, dt, p);
  double max_jump = 0.0;
  for (std::size_t k = 1; k < currents.size(); ++k) {
    max_jump = std::max(max_jump, std::abs(currents[k] - currents[k - 1]));
  }
  const double bound = p.lambda * dt * max_jump / (2.0 * p.q_max) + 1e-15;
  for (std::size_t k = 0; k + 1 < currents.size(); ++k) {
    const double trapezoid = p.lambda * dt * 0.5 * (currents[k] + currents[k + 1]) / p.q_max;
    const double rect = trace.soc[k] - trace.soc[k + 1];
    EXPECT_LE(std::abs(rect - trapezoid), bound);
  }
}

TEST(CurrentProfile, ContractsPerKind) {
  const auto c = generate_current_profile(ProfileKind::constant, 10.0, 1.0, 3.0, 1);
  ASSERT_EQ(c.size(), 10u);
  for (double v : c) EXPECT_EQ(v, 3.0);
  const auto pulse = generate_current_profile(ProfileKind::pulse, 600.0, 1.0, 2.0, 1);
  double mean = 0.0;
  for (double v : pulse) mean += v;
  EXPECT_NEAR(mean / static_cast<double>(pulse.size()), 1.0, 1e-12);
  ProfileOptions opts;
  const auto urban = generate_current_profile(ProfileKind::urban_like, 1800.0, 0.1, 3.0, 9, opts);
  EXPECT_EQ(urban.size(), 18000u);
  for (double v : urban) EXPECT_LE(std::abs(v), opts.ceiling_factor * 3.0);
  EXPECT_EQ(urban, generate_current_profile(ProfileKind::urban_like, 1800.0, 0.1, 3.0, 9, opts));
}

TEST(SimulateTrace, NoiselessMatchesDeterministicModel) {
  const auto p = reference_params();
  const auto ocv = reference_curve();
  const auto currents = generate_current_profile(ProfileKind::urban_like, 300.0, 1.0, 3.0, 2);
  const auto d = simulate_trace(p, ocv, currents, 1.0, 0.9, Matrix::Zero(3, 3), {}, 5);
  noise::MixedNoiseSpec none;
  none.base.var = 1e-300;
  BatteryState s{0.9, 0, 0, false};
  const auto clean = simulate_trace(p, ocv, currents, 1.0, 0.9, Matrix::Zero(3, 3), none, 5);
  for (std::size_t k = 0; k < currents.size(); ++k) {
    EXPECT_NEAR(clean.voltage[k], measure_voltage(s, currents[k], p, ocv), 1e-12);
    EXPECT_EQ(clean.soc_true[k], s.soc);
    s = state_transition(s, currents[k], 1.0, p);
  }
  EXPECT_EQ(d.voltage, simulate_trace(p, ocv, currents, 1.0, 0.9, Matrix::Zero(3, 3), {}, 5).voltage);
}

TEST(SimulateTrace, ProcessNoiseStatistics) {
  auto p = reference_params();
  p.q_max = 1e12;  // keeps SOC away from the clamp
  const std::size_t n = 100000;
  const std::vector<double> zero(n, 0.0);
  const Matrix q = 1e-6 * Matrix::Identity(3, 3);
  noise::MixedNoiseSpec quiet;
  quiet.base.var = 1e-300;
  const auto d = simulate_trace(p, OcvCurve({3.5, 0, 0, 0, 0, 0, 0}), zero, 1.0, 0.5, q, quiet, 3);
  double s2 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double w = d.soc_true[k + 1] - d.soc_true[k];
    s2 += w * w;
  }
  EXPECT_NEAR(std::sqrt(s2 / static_cast<double>(n - 1)), 1e-3, 1e-5);
  const double a1 = std::exp(-1.0 / (p.r1 * p.c1));
  double u2 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double w = d.u1_true[k + 1] - a1 * d.u1_true[k];
    u2 += w * w;
  }
  EXPECT_NEAR(std::sqrt(u2 / static_cast<double>(n - 1)), 1e-3, 1e-5);
}

}  // namespace
}  // namespace gmmee::battery
