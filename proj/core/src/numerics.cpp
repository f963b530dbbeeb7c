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

#include "gmmee/numerics.hpp"

#include <cmath>
#include <string>

#include "gmmee/errors.hpp"

namespace gmmee::numerics {

SquareRootFactor::SquareRootFactor(Matrix lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols()) {
    throw DomainError("SquareRootFactor: matrix is not square");
  }
  for (Eigen::Index j = 0; j < lower_.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (lower_(i, j) != 0.0) {
        throw DomainError("SquareRootFactor: non-zero entry above the diagonal");
      }
    }
    if (!(lower_(j, j) > 0.0) || !std::isfinite(lower_(j, j))) {
      throw NotPositiveDefinite("SquareRootFactor: diagonal entry " +
                                std::to_string(j) + " is not strictly positive");
    }
  }
}

SquareRootFactor SquareRootFactor::identity(Eigen::Index n) {
  return SquareRootFactor(Matrix::Identity(n, n));
}

Matrix SquareRootFactor::reconstruct() const {
  Matrix p = lower_ * lower_.transpose();
  return 0.5 * (p + p.transpose());
}

Matrix SquareRootFactor::solve_lower(const Matrix& rhs) const {
  return lower_.triangularView<Eigen::Lower>().solve(rhs);
}

Matrix SquareRootFactor::solve_upper(const Matrix& rhs) const {
  return lower_.transpose().triangularView<Eigen::Upper>().solve(rhs);
}

Matrix SquareRootFactor::solve(const Matrix& rhs) const {
  return solve_upper(solve_lower(rhs));
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

namespace {

// Returns false instead of throwing so the caller can retry with jitter.
bool try_cholesky(const Matrix& sym, Matrix& lower) {
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  for (Eigen::Index i = 0; i < lower.rows(); ++i) {
    if (!(lower(i, i) > 0.0) || !std::isfinite(lower(i, i))) return false;
  }
  return true;
}

}  // namespace

SquareRootFactor cholesky_lower(const Matrix& p) {
  if (p.rows() != p.cols()) throw DomainError("cholesky_lower: matrix is not square");
  if (!p.allFinite()) throw NonFinite("cholesky_lower: non-finite entry");
  const Matrix sym = 0.5 * (p + p.transpose());
  Matrix lower;
  if (try_cholesky(sym, lower)) return SquareRootFactor(std::move(lower));

  const auto n = static_cast<double>(sym.rows());
  const double jitter = kJitterScale * std::abs(sym.trace()) / n;
  const Matrix retry = sym + jitter * Matrix::Identity(sym.rows(), sym.cols());
  if (jitter > 0.0 && try_cholesky(retry, lower)) return SquareRootFactor(std::move(lower));
  throw NotPositiveDefinite("cholesky_lower: factorization failed after jitter retry");
}

SquareRootFactor tria(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() < n) throw DomainError("tria: input must have at least as many columns as rows");
  if (!a.allFinite()) throw NonFinite("tria: non-finite entry");

  Eigen::HouseholderQR<Matrix> qr(a.transpose());
  Matrix s = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (s(j, j) < 0.0) s.col(j) = -s.col(j);
    if (s(j, j) < kRankTolerance) {
      throw RankDeficient("tria: diagonal entry " + std::to_string(j) + " below rank tolerance");
    }
  }
  return SquareRootFactor(std::move(s));
}

Matrix psd_repair(const Matrix& p) {
  if (p.rows() != p.cols()) throw DomainError("psd_repair: matrix is not square");
  if (!p.allFinite()) throw NonFinite("psd_repair: non-finite entry");
  const Matrix sym = 0.5 * (p + p.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.eigenvalues().minCoeff() >= kEigenFloor) return sym;
  const Vector clamped = eig.eigenvalues().cwiseMax(kEigenFloor);
  Matrix out = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double gamma_fn(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("gamma_fn: argument must be a positive finite number");
  }
  return std::tgamma(a);
}

SquareRootFactor block_diag(const SquareRootFactor& a, const SquareRootFactor& b) {
  const Eigen::Index n = a.dim();
  const Eigen::Index m = b.dim();
  Matrix out = Matrix::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = a.matrix();
  out.bottomRightCorner(m, m) = b.matrix();
  return SquareRootFactor(std::move(out));
}

}  // namespace gmmee::numerics
