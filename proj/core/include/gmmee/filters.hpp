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

#include <functional>
#include <string>
#include <vector>

#include "gmmee/battery.hpp"
#include "gmmee/criterion.hpp"
#include "gmmee/numerics.hpp"

namespace gmmee::filters {

using numerics::SquareRootFactor;

using TransitionFn = std::function<Vector(const Vector& x, double input, double dt)>;
using ObservationFn = std::function<Vector(const Vector& x, double input)>;

/// x' = f(x, u, dt) + w,  y = h(x, u) + r,  w ~ N(0, Q), r ~ N(0, R).
/// The callables must be free of side effects.
struct StateSpaceModel {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  TransitionFn transition;
  ObservationFn observation;
  Matrix q_cov;
  Matrix r_cov;

  void validate() const;
};

/// The three-state RC battery model (SOC, U₁, U₂) with terminal voltage output.
StateSpaceModel battery_model(const battery::EcmParams& params, const battery::OcvCurve& ocv,
                              Matrix q_cov, Matrix r_cov);

/// x' = A·x + B·u, y = H·x + D·u (B and D are n×1 and m×1 columns).
StateSpaceModel linear_model(Matrix a, Vector b, Matrix h, Vector d, Matrix q_cov, Matrix r_cov);

/// Inputs for one filter step: the prediction uses the previous sample's
/// input, the measurement model the current one.
struct StepInput {
  double predict_input = 0.0;
  double measure_input = 0.0;
  double dt = 1.0;
};

struct Diagnostics {
  Vector innovation;
  int iterations = 0;
  bool iteration_cap = false;
  bool fallback = false;
  bool covariance_repaired = false;
  /// J_L at each fixed-point iterate (only when requested in the config).
  std::vector<double> cost_trace;
};

struct FilterState {
  Vector x_hat;
  SquareRootFactor sqrt_cov;
  Diagnostics diagnostics;

  Matrix covariance() const { return sqrt_cov.reconstruct(); }
};

FilterState initial_state(const Vector& x0, const Matrix& p0);

/// Third-degree spherical-radial cubature rule: 2n points ξᵢ = √n·eᵢ and
/// ξ_{i+n} = −ξᵢ, equal weights 1/(2n).
struct CubaturePointSet {
  Matrix unit;  // n × 2n

  static CubaturePointSet make(Eigen::Index n);
  Eigen::Index size() const { return unit.cols(); }
  double weight() const { return 1.0 / static_cast<double>(unit.cols()); }
  Matrix points(const Vector& mean, const SquareRootFactor& s) const;
};

struct Prediction {
  Vector x_pred;
  SquareRootFactor sqrt_p_pred;
  Matrix chi_star;  // n × 2n, centered propagated points / √(2n)
};

/// Cubature time update; sqrt_q is the cached Cholesky factor of Q.
Prediction srckf_predict(const FilterState& prev, double input, double dt,
                         const StateSpaceModel& model, const SquareRootFactor& sqrt_q);
Prediction srckf_predict(const FilterState& prev, double input, double dt,
                         const StateSpaceModel& model);

struct MeasurementSetup {
  Vector y_pred;
  Matrix h_bar;              // m × n statistical linearization Pxyᵀ·P⁻¹
  SquareRootFactor b_tau;    // blockdiag(B_p, B_r)
  SquareRootFactor sqrt_r;   // B_r, factor of the effective measurement covariance
  SquareRootFactor sqrt_r_nominal;  // factor of the model's R
  Matrix p_xy;               // n × m
  Matrix chi;                // n × 2n, centered measurement cubature points / √(2n)
  Matrix zeta;               // m × 2n
};

/// Fresh cubature points around the prediction, the predicted measurement and
/// the regression quantities. The measurement block of b_tau factors
/// R + ½·Σ sᵢsᵢᵀ, where sᵢ = ζᵢ + ζ_{i+n} is the part of the measurement
/// spread the linearization h_bar cannot explain (zero for linear h).
MeasurementSetup srckf_measurement_setup(const Prediction& pred, double input,
                                         const StateSpaceModel& model,
                                         const SquareRootFactor& sqrt_r);
MeasurementSetup srckf_measurement_setup(const Prediction& pred, double input,
                                         const StateSpaceModel& model);

/// How the kernel weights enter the fixed-point normal equations.
enum class WeightForm {
  /// Ω = diag(ωᵢ), ωᵢ = Σ_{j≠i} κ(eⱼ − eᵢ): each whitened residual is weighted
  /// by the mixture-kernel density of the remaining residuals.
  density,
  /// Ω = Σ_c l_c·(Λ̄_c − Λ_c): the stationarity condition of J_L. Translation
  /// invariant in the residuals, so it has no Kalman limit.
  laplacian,
};

WeightForm weight_form_from_string(const std::string& s);
std::string to_string(WeightForm f);

struct GmmeeConfig {
  criterion::MixtureKernel mixture{criterion::GgdKernel(2.0, 1.0)};
  double fp_tol = 1e-6;
  int fp_max_iter = 20;
  double singularity_eps = criterion::kDefaultSingularityEps;
  WeightForm weight_form = WeightForm::density;
  /// Evaluate α = 2 kernels as exp(−e²/β²)/(β√π) rather than through the
  /// generalized density (the MEE/MMEE code path).
  bool gaussian_closed_form = false;
  /// Use only k1 (the GMEE/MEE code path).
  bool single_kernel = false;
  bool record_cost = false;
  /// Iterate norms above this downgrade the step to the plain SRCKF gain.
  double divergence_norm = 1e6;

  void validate() const;
};

FilterState gmmee_fixed_point_update(const Prediction& pred, const Vector& y,
                                     const MeasurementSetup& setup, const GmmeeConfig& cfg);

struct MccConfig {
  double sigma = 1.0;  // Gaussian kernel bandwidth on whitened residuals
  double fp_tol = 1e-6;
  int fp_max_iter = 20;

  void validate() const;
};

/// Fixed-point correntropy update: each whitened residual eᵢ is weighted by
/// exp(−eᵢ² / (2σ²)).
FilterState mcc_fixed_point_update(const Prediction& pred, const Vector& y,
                                   const MeasurementSetup& setup, const MccConfig& cfg);

/// Plain square-root cubature measurement update.
FilterState srckf_update(const Prediction& pred, const Vector& y, const MeasurementSetup& setup);

enum class FilterKind { ukf, ckf, srckf, mcc_ckf, mee_ckf, gmee_ckf, mmee_ckf, gmmee_srckf };

FilterKind filter_kind_from_string(const std::string& s);
std::string to_string(FilterKind k);
/// Display order used by comparison tables.
const std::vector<FilterKind>& comparison_order();

struct KernelParams {
  double eta = 0.5;
  double alpha1 = 2.0;
  double beta1 = 1.0;
  double alpha2 = 2.0;
  double beta2 = 1.0;
};

struct UkfParams {
  double alpha = 1e-3;
  double beta = 2.0;
  double kappa = 0.0;
};

struct VariantConfig {
  FilterKind kind = FilterKind::gmmee_srckf;
  KernelParams kernels;
  double fp_tol = 1e-6;
  int fp_max_iter = 20;
  double singularity_eps = criterion::kDefaultSingularityEps;
  WeightForm weight_form = WeightForm::density;
  bool record_cost = false;
  double mcc_sigma = 1.0;
  UkfParams ukf;

  /// GmmeeConfig realized by this variant. MEE uses the single Gaussian kernel
  /// (2, β₁); GMEE the single kernel (α₁, β₁); MMEE the Gaussian pair (2, β₁),
  /// (2, β₂) mixed by η; GMMEE the full generalized mixture.
  GmmeeConfig gmmee_config() const;
  MccConfig mcc_config() const;
};

/// Stateful filter instance. Caches the factors of Q and R.
class Filter {
 public:
  Filter(StateSpaceModel model, VariantConfig cfg, FilterState init);

  const FilterState& step(const StepInput& in, const Vector& y);
  const FilterState& state() const { return state_; }
  const VariantConfig& config() const { return cfg_; }
  const StateSpaceModel& model() const { return model_; }

 private:
  StateSpaceModel model_;
  VariantConfig cfg_;
  GmmeeConfig gmmee_;
  MccConfig mcc_;
  SquareRootFactor sqrt_q_;
  SquareRootFactor sqrt_r_;
  FilterState state_;
};

/// One predict + update with the selected variant.
FilterState filter_step(const FilterState& state, const StepInput& in, const Vector& y,
                        const StateSpaceModel& model, const VariantConfig& cfg);

FilterState ukf_step(const FilterState& state, const StepInput& in, const Vector& y,
                     const StateSpaceModel& model, const UkfParams& params);
FilterState ckf_step(const FilterState& state, const StepInput& in, const Vector& y,
                     const StateSpaceModel& model);
FilterState srckf_step(const FilterState& state, const StepInput& in, const Vector& y,
                       const StateSpaceModel& model);
FilterState mcc_ckf_step(const FilterState& state, const StepInput& in, const Vector& y,
                         const StateSpaceModel& model, const MccConfig& cfg);
FilterState gmmee_step(const FilterState& state, const StepInput& in, const Vector& y,
                       const StateSpaceModel& model, const GmmeeConfig& cfg);

}  // namespace gmmee::filters
