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

#include <span>

#include "gmmee/numerics.hpp"

namespace gmmee::criterion {

/// Default clamp for |eⱼ − eᵢ| in the |·|^(α−2) factor of the weight matrices.
inline constexpr double kDefaultSingularityEps = 1e-8;
/// Log-densities below this are flushed to an exact zero density.
inline constexpr double kLogUnderflow = -700.0;

/// Generalized Gaussian density kernel
///   G(e) = α / (2β·Γ(1/α)) · exp(−|e/β|^α).
/// alpha = 2 gives a Gaussian with standard deviation β/√2.
class GgdKernel {
 public:
  GgdKernel(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double log_density(double e) const;
  double density(double e) const;
  /// α / β^α: the factor pulled out of the kernel derivative.
  double derivative_scale() const;

 private:
  double alpha_;
  double beta_;
  double log_norm_;
};

/// η·G₁ + (1 − η)·G₂.
class MixtureKernel {
 public:
  MixtureKernel(double eta, GgdKernel k1, GgdKernel k2);
  /// Single-kernel mixture (η = 1, both components equal).
  explicit MixtureKernel(GgdKernel k);

  double eta() const { return eta_; }
  const GgdKernel& k1() const { return k1_; }
  const GgdKernel& k2() const { return k2_; }

 private:
  double eta_;
  GgdKernel k1_;
  GgdKernel k2_;
};

/// Pairwise weights Λᵢⱼ = G(eⱼ − eᵢ)·max(|eⱼ − eᵢ|, ε)^(α−2) and the diagonal
/// matrix of their row sums. lam_bar − lam is a graph Laplacian.
struct KernelWeightMatrices {
  Matrix lam;
  Matrix lam_bar;

  /// lam_bar − lam.
  Matrix laplacian() const { return lam_bar - lam; }
};

double ggd_density(const GgdKernel& kernel, double e);
double mixture_density(const MixtureKernel& mk, double e);

/// Second-order information potential (1/L²)·ΣᵢΣⱼ κ(eᵢ − eⱼ), i = j included.
/// Throws EmptyInput for an empty error vector.
double information_potential(std::span<const double> errors, const MixtureKernel& mk);

/// Filter cost J_L over the stacked state/measurement residuals. Numerically
/// the same quantity as information_potential but evaluated by its own loop
/// over both kernel components.
double cost(std::span<const double> errors, const MixtureKernel& mk);

KernelWeightMatrices kernel_weight_matrices(std::span<const double> errors,
                                            const GgdKernel& kernel,
                                            double epsilon = kDefaultSingularityEps);

/// ∂J/∂e assembled from the weight matrices:
///   −(2/L²)·Σ_c l_c·(Λ̄_c − Λ_c)·e,   l₁ = η·α₁/β₁^α₁, l₂ = (1−η)·α₂/β₂^α₂.
Vector cost_gradient(std::span<const double> errors, const MixtureKernel& mk,
                     double epsilon = kDefaultSingularityEps);

/// Leave-one-out mixture density of every residual within the set,
///   ωᵢ = Σ_{j≠i} κ(eⱼ − eᵢ).
/// Self pairs are excluded because they are constant in the residuals.
Vector residual_density_weights(std::span<const double> errors, const MixtureKernel& mk);

}  // namespace gmmee::criterion
