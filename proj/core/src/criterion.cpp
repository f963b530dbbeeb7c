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

#include "gmmee/criterion.hpp"

#include <cmath>

#include "gmmee/errors.hpp"

namespace gmmee::criterion {

GgdKernel::GgdKernel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("GgdKernel: alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("GgdKernel: beta must be > 0");
  // log(α / (2β·Γ(1/α)))
  log_norm_ = std::log(alpha) - std::log(2.0 * beta) - std::lgamma(1.0 / alpha);
}

double GgdKernel::log_density(double e) const {
  return log_norm_ - std::pow(std::abs(e / beta_), alpha_);
}

double GgdKernel::density(double e) const {
  const double lg = log_density(e);
  return lg < kLogUnderflow ? 0.0 : std::exp(lg);
}

double GgdKernel::derivative_scale() const { return alpha_ / std::pow(beta_, alpha_); }

MixtureKernel::MixtureKernel(double eta, GgdKernel k1, GgdKernel k2)
    : eta_(eta), k1_(k1), k2_(k2) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("MixtureKernel: eta must lie in [0, 1]");
}

MixtureKernel::MixtureKernel(GgdKernel k) : MixtureKernel(1.0, k, k) {}

double ggd_density(const GgdKernel& kernel, double e) { return kernel.density(e); }

double mixture_density(const MixtureKernel& mk, double e) {
  return mk.eta() * mk.k1().density(e) + (1.0 - mk.eta()) * mk.k2().density(e);
}

double information_potential(std::span<const double> errors, const MixtureKernel& mk) {
  if (errors.empty()) throw EmptyInput("information_potential: empty error vector");
  const auto l = static_cast<double>(errors.size());
  double sum = 0.0;
  for (double ei : errors) {
    for (double ej : errors) sum += mixture_density(mk, ei - ej);
  }
  return sum / (l * l);
}

double cost(std::span<const double> errors, const MixtureKernel& mk) {
  if (errors.empty()) throw EmptyInput("cost: empty error vector");
  const std::size_t l = errors.size();
  const double eta = mk.eta();
  double sum = 0.0;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      const double d = errors[i] - errors[j];
      const double g1 = ggd_density(mk.k1(), d);
      const double g2 = ggd_density(mk.k2(), d);
      sum += eta * g1 + (1.0 - eta) * g2;
    }
  }
  const auto lf = static_cast<double>(l);
  return sum / (lf * lf);
}

KernelWeightMatrices kernel_weight_matrices(std::span<const double> errors,
                                            const GgdKernel& kernel, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("kernel_weight_matrices: epsilon must be > 0");
  const auto l = static_cast<Eigen::Index>(errors.size());
  KernelWeightMatrices out{Matrix::Zero(l, l), Matrix::Zero(l, l)};
  const double exponent = kernel.alpha() - 2.0;
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = i; j < l; ++j) {
      const double d = errors[j] - errors[i];
      double w = kernel.density(d);
      if (exponent != 0.0 && w != 0.0) w *= std::pow(std::max(std::abs(d), epsilon), exponent);
      out.lam(i, j) = w;
      out.lam(j, i) = w;
    }
  }
  out.lam_bar.diagonal() = out.lam.rowwise().sum();
  return out;
}

Vector cost_gradient(std::span<const double> errors, const MixtureKernel& mk, double epsilon) {
  const auto l = static_cast<Eigen::Index>(errors.size());
  if (l == 0) throw EmptyInput("cost_gradient: empty error vector");
  const Eigen::Map<const Vector> e(errors.data(), l);
  const double l1 = mk.eta() * mk.k1().derivative_scale();
  const double l2 = (1.0 - mk.eta()) * mk.k2().derivative_scale();
  Vector grad = Vector::Zero(l);
  if (l1 != 0.0) grad += l1 * (kernel_weight_matrices(errors, mk.k1(), epsilon).laplacian() * e);
  if (l2 != 0.0) grad += l2 * (kernel_weight_matrices(errors, mk.k2(), epsilon).laplacian() * e);
  const auto lf = static_cast<double>(l);
  return -(2.0 / (lf * lf)) * grad;
}

Vector residual_density_weights(std::span<const double> errors, const MixtureKernel& mk) {
  const auto l = static_cast<Eigen::Index>(errors.size());
  Vector w = Vector::Zero(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = i + 1; j < l; ++j) {
      const double k = mixture_density(mk, errors[j] - errors[i]);
      w(i) += k;
      w(j) += k;
    }
  }
  return w;
}

}  // namespace gmmee::criterion
