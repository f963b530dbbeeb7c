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

#include <Eigen/Dense>

namespace gmmee {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numerics {

/// Reconstruction tolerance promised by cholesky_lower and tria.
inline constexpr double kFactorTolerance = 1e-10;
/// Eigenvalue floor applied by psd_repair.
inline constexpr double kEigenFloor = 1e-12;
/// Diagonal entries of a tria() factor below this signal rank deficiency.
inline constexpr double kRankTolerance = 1e-14;
/// Relative jitter (times trace/n) added on the single Cholesky retry.
inline constexpr double kJitterScale = 1e-10;

/// Lower-triangular factor S of a symmetric positive definite matrix P = S·Sᵀ.
///
/// The constructor enforces the invariants (square, zero above the diagonal,
/// strictly positive diagonal); all other members are read-only views and
/// triangular solves, so no inverse is ever formed from a factor.
class SquareRootFactor {
 public:
  SquareRootFactor() = default;
  explicit SquareRootFactor(Matrix lower);

  static SquareRootFactor identity(Eigen::Index n);

  Eigen::Index dim() const { return lower_.rows(); }
  const Matrix& matrix() const { return lower_; }

  /// S·Sᵀ, symmetrized.
  Matrix reconstruct() const;

  /// S⁻¹·B.
  Matrix solve_lower(const Matrix& rhs) const;
  /// S⁻ᵀ·B.
  Matrix solve_upper(const Matrix& rhs) const;
  /// (S·Sᵀ)⁻¹·B.
  Matrix solve(const Matrix& rhs) const;

 private:
  Matrix lower_;
};

/// Lower Cholesky factor of a symmetric matrix. The input is symmetrized first
/// and, if the plain factorization fails, retried once with a trace-scaled
/// diagonal jitter. Throws NotPositiveDefinite when both attempts fail.
SquareRootFactor cholesky_lower(const Matrix& p);

/// Lower-triangular S with S·Sᵀ = A·Aᵀ for a wide (n×k, k ≥ n) matrix A,
/// computed from the QR decomposition of Aᵀ with a non-negative diagonal.
/// Throws RankDeficient if any diagonal entry falls below kRankTolerance.
SquareRootFactor tria(const Matrix& a);

/// Symmetrizes P and clamps its eigenvalues to at least kEigenFloor. Inputs
/// that are already symmetric with every eigenvalue above the floor come back
/// unchanged. Throws NonFinite on NaN/Inf entries.
Matrix psd_repair(const Matrix& p);

/// Γ(a) for a > 0; throws DomainError otherwise.
double gamma_fn(double a);

/// Block-diagonal stacking of two lower factors.
SquareRootFactor block_diag(const SquareRootFactor& a, const SquareRootFactor& b);

bool all_finite(const Matrix& m);

}  // namespace numerics
}  // namespace gmmee
