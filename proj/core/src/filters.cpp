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

#include "gmmee/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gmmee/errors.hpp"

namespace gmmee::filters {

namespace {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Models

void StateSpaceModel::validate() const {
  require(n > 0 && m > 0, "StateSpaceModel: dimensions must be positive");
  require(static_cast<bool>(transition) && static_cast<bool>(observation),
          "StateSpaceModel: transition and observation callables are required");
  require(q_cov.rows() == n && q_cov.cols() == n, "StateSpaceModel: Q must be n x n");
  require(r_cov.rows() == m && r_cov.cols() == m, "StateSpaceModel: R must be m x m");
  // Factorization throws NotPositiveDefinite for non-SPD covariances.
  numerics::cholesky_lower(q_cov);
  numerics::cholesky_lower(r_cov);
}

StateSpaceModel battery_model(const battery::EcmParams& params, const battery::OcvCurve& ocv,
                              Matrix q_cov, Matrix r_cov) {
  params.validate();
  StateSpaceModel m;
  m.n = 3;
  m.m = 1;
  m.transition = [params](const Vector& x, double current, double dt) {
    return battery::transition(x, current, dt, params);
  };
  m.observation = [params, ocv](const Vector& x, double current) {
    return Vector::Constant(1, battery::measure_voltage(x, current, params, ocv));
  };
  m.q_cov = std::move(q_cov);
  m.r_cov = std::move(r_cov);
  return m;
}

StateSpaceModel linear_model(Matrix a, Vector b, Matrix h, Vector d, Matrix q_cov, Matrix r_cov) {
  StateSpaceModel m;
  m.n = a.rows();
  m.m = h.rows();
  require(a.cols() == m.n && b.size() == m.n && h.cols() == m.n && d.size() == m.m,
          "linear_model: inconsistent dimensions");
  m.transition = [a, b](const Vector& x, double u, double) -> Vector { return a * x + b * u; };
  m.observation = [h, d](const Vector& x, double u) -> Vector { return h * x + d * u; };
  m.q_cov = std::move(q_cov);
  m.r_cov = std::move(r_cov);
  return m;
}

FilterState initial_state(const Vector& x0, const Matrix& p0) {
  require(p0.rows() == x0.size() && p0.cols() == x0.size(), "initial_state: P0 must be n x n");
  return FilterState{x0, numerics::cholesky_lower(p0), Diagnostics{}};
}

// ---------------------------------------------------------------------------
// Cubature machinery

CubaturePointSet CubaturePointSet::make(Eigen::Index n) {
  require(n > 0, "CubaturePointSet: n must be positive");
  CubaturePointSet set;
  set.unit = Matrix::Zero(n, 2 * n);
  const double r = std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    set.unit(i, i) = r;
    set.unit(i, i + n) = -r;
  }
  return set;
}

Matrix CubaturePointSet::points(const Vector& mean, const SquareRootFactor& s) const {
  return (s.matrix() * unit).colwise() + mean;
}

namespace {

// Centers the columns about their mean and scales by 1/√(2n).
Matrix centered(const Matrix& pts, const Vector& mean) {
  return (pts.colwise() - mean) / std::sqrt(static_cast<double>(pts.cols()));
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

Prediction srckf_predict(const FilterState& prev, double input, double dt,
                         const StateSpaceModel& model, const SquareRootFactor& sqrt_q) {
  const Eigen::Index n = model.n;
  const auto cubature = CubaturePointSet::make(n);
  const Matrix pts = cubature.points(prev.x_hat, prev.sqrt_cov);
  Matrix propagated(n, pts.cols());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    propagated.col(i) = model.transition(pts.col(i), input, dt);
  }
  const Vector x_pred = propagated.rowwise().mean();
  Matrix chi_star = centered(propagated, x_pred);
  SquareRootFactor s = numerics::tria(hcat(chi_star, sqrt_q.matrix()));
  return Prediction{x_pred, std::move(s), std::move(chi_star)};
}

Prediction srckf_predict(const FilterState& prev, double input, double dt,
                         const StateSpaceModel& model) {
  return srckf_predict(prev, input, dt, model, numerics::cholesky_lower(model.q_cov));
}

MeasurementSetup srckf_measurement_setup(const Prediction& pred, double input,
                                         const StateSpaceModel& model,
                                         const SquareRootFactor& sqrt_r) {
  const Eigen::Index n = model.n;
  const Eigen::Index m = model.m;
  const auto cubature = CubaturePointSet::make(n);
  const Matrix pts = cubature.points(pred.x_pred, pred.sqrt_p_pred);
  Matrix ys(m, pts.cols());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) ys.col(i) = model.observation(pts.col(i), input);
  const Vector y_pred = ys.rowwise().mean();
  Matrix zeta = centered(ys, y_pred);
  Matrix chi = centered(pts, pred.x_pred);
  Matrix p_xy = chi * zeta.transpose();

  // h_bar = Pxyᵀ·(B·Bᵀ)⁻¹ by two triangular solves.
  Matrix h_bar = pred.sqrt_p_pred.solve(p_xy).transpose();

  // Residual spread of the measurement points that the linear map h_bar
  // cannot reproduce: ½·Σ (ζᵢ + ζ_{i+n})(ζᵢ + ζ_{i+n})ᵀ.
  const Matrix sym = zeta.leftCols(n) + zeta.rightCols(n);
  const Matrix r_eff = sqrt_r.reconstruct() + 0.5 * sym * sym.transpose();
  SquareRootFactor br = numerics::cholesky_lower(r_eff);

  MeasurementSetup out{y_pred,
                       std::move(h_bar),
                       numerics::block_diag(pred.sqrt_p_pred, br),
                       br,
                       sqrt_r,
                       std::move(p_xy),
                       std::move(chi),
                       std::move(zeta)};
  return out;
}

MeasurementSetup srckf_measurement_setup(const Prediction& pred, double input,
                                         const StateSpaceModel& model) {
  return srckf_measurement_setup(pred, input, model, numerics::cholesky_lower(model.r_cov));
}

// ---------------------------------------------------------------------------
// Measurement updates

namespace {

// Posterior factor of the Joseph form (I − K·H)·P·(I − K·H)ᵀ + K·R·Kᵀ,
// triangularized directly from [ (I − K·H)·B_p , K·B_r ].
SquareRootFactor joseph_factor(const Prediction& pred, const MeasurementSetup& setup,
                               const Matrix& gain, bool& repaired) {
  const Eigen::Index n = pred.x_pred.size();
  const Matrix a = hcat((identity(n) - gain * setup.h_bar) * pred.sqrt_p_pred.matrix(),
                        gain * setup.sqrt_r.matrix());
  try {
    return numerics::tria(a);
  } catch (const RankDeficient&) {
    repaired = true;
    return numerics::cholesky_lower(numerics::psd_repair(a * a.transpose()));
  }
}

// Standard square-root cubature gain Pxy·Pyy⁻¹ expressed through the
// regression quantities (Pyy = H·P·Hᵀ + R_eff).
Matrix plain_gain(const Prediction& pred, const MeasurementSetup& setup) {
  const Matrix g = pred.sqrt_p_pred.solve_lower(setup.p_xy);  // B_p⁻¹·Pxy
  const SquareRootFactor s_yy = numerics::tria(hcat(g.transpose(), setup.sqrt_r.matrix()));
  return s_yy.solve(setup.p_xy.transpose()).transpose();
}

// Linear regression D = W·x + e of the whitened prior and measurement,
// expressed in the increment δ = x − x_pred: e(δ) = z − W·δ.
struct Regression {
  Matrix w;         // (n+m) × n
  Vector z;         // (n+m)
  Matrix meas_sel;  // (n+m) × m, maps an innovation into whitened coordinates
};

Regression make_regression(const Prediction& pred, const MeasurementSetup& setup,
                           const Vector& innovation) {
  const Eigen::Index n = pred.x_pred.size();
  const Eigen::Index m = innovation.size();
  Regression r;
  r.w.resize(n + m, n);
  r.w.topRows(n) = pred.sqrt_p_pred.solve_lower(identity(n));
  r.w.bottomRows(m) = setup.sqrt_r.solve_lower(setup.h_bar);
  r.meas_sel = Matrix::Zero(n + m, m);
  r.meas_sel.bottomRows(m) = setup.sqrt_r.solve_lower(identity(m));
  r.z = r.meas_sel * innovation;
  return r;
}

// Fills Ω for the residual vector; returns false when every weight vanished.
using WeightFn = std::function<bool(const Vector& e, Matrix& omega)>;

struct RobustOptions {
  double fp_tol;
  int fp_max_iter;
  double divergence_norm;
  bool record_cost;
  std::function<double(const Vector&)> cost;
};

FilterState robust_update(const Prediction& pred, const Vector& y, const MeasurementSetup& setup,
                          const WeightFn& weights, const RobustOptions& opt) {
  const Eigen::Index n = pred.x_pred.size();
  const Vector innovation = y - setup.y_pred;
  const Regression reg = make_regression(pred, setup, innovation);

  Diagnostics diag;
  diag.innovation = innovation;

  Vector delta = Vector::Zero(n);
  Matrix gain;
  bool converged = false;
  bool breakdown = false;
  Matrix omega;
  for (int it = 1; it <= opt.fp_max_iter; ++it) {
    const Vector e = reg.z - reg.w * delta;
    if (opt.record_cost) diag.cost_trace.push_back(opt.cost(e));
    if (!weights(e, omega)) {
      breakdown = true;
      break;
    }
    const Matrix wt_omega = reg.w.transpose() * omega;
    const Matrix normal = wt_omega * reg.w;
    Eigen::LDLT<Matrix> ldlt(normal);
    const Vector pivots = ldlt.vectorD().cwiseAbs();
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14) ||
        !(pivots.minCoeff() > 1e-14 * pivots.maxCoeff())) {
      breakdown = true;
      break;
    }
    Matrix next_gain = ldlt.solve(wt_omega * reg.meas_sel);
    Vector next_delta = next_gain * innovation;
    if (!next_gain.allFinite() || !(next_delta.norm() <= opt.divergence_norm)) {
      breakdown = true;
      break;
    }
    diag.iterations = it;
    const Vector x_old = pred.x_pred + delta;
    const Vector x_new = pred.x_pred + next_delta;
    const double rel = (x_new - x_old).norm() / std::max(x_old.norm(), 1e-12);
    delta = std::move(next_delta);
    gain = std::move(next_gain);
    if (rel < opt.fp_tol) {
      converged = true;
      break;
    }
  }

  if (breakdown) {
    diag.fallback = true;
    gain = plain_gain(pred, setup);
    delta = gain * innovation;
  } else if (!converged) {
    diag.iteration_cap = true;
  }
  if (opt.record_cost) diag.cost_trace.push_back(opt.cost(reg.z - reg.w * delta));

  bool repaired = false;
  SquareRootFactor s = joseph_factor(pred, setup, gain, repaired);
  diag.covariance_repaired = repaired;
  return FilterState{pred.x_pred + delta, std::move(s), std::move(diag)};
}

double gaussian_kernel(double beta, double d) {
  const double u = d / beta;
  const double lg = -u * u - std::log(beta * std::sqrt(std::numbers::pi));
  return lg < criterion::kLogUnderflow ? 0.0 : std::exp(lg);
}

bool normalize_diagonal(Vector w, Matrix& omega) {
  const double top = w.maxCoeff();
  if (!(top > 0.0) || !std::isfinite(top)) return false;
  omega = (w / top).asDiagonal();
  return true;
}

WeightFn make_gmmee_weights(const GmmeeConfig& cfg) {
  const criterion::MixtureKernel mk =
      cfg.single_kernel ? criterion::MixtureKernel(cfg.mixture.k1()) : cfg.mixture;
  if (cfg.weight_form == WeightForm::laplacian) {
    const double eps = cfg.singularity_eps;
    return [mk, eps](const Vector& e, Matrix& omega) {
      const std::span<const double> span(e.data(), static_cast<std::size_t>(e.size()));
      const double l1 = mk.eta() * mk.k1().derivative_scale();
      const double l2 = (1.0 - mk.eta()) * mk.k2().derivative_scale();
      omega = Matrix::Zero(e.size(), e.size());
      if (l1 != 0.0) omega += l1 * criterion::kernel_weight_matrices(span, mk.k1(), eps).laplacian();
      if (l2 != 0.0) omega += l2 * criterion::kernel_weight_matrices(span, mk.k2(), eps).laplacian();
      const double top = omega.cwiseAbs().maxCoeff();
      if (!(top > 0.0) || !std::isfinite(top)) return false;
      omega /= top;
      return true;
    };
  }
  if (cfg.gaussian_closed_form) {
    const double eta = mk.eta();
    const double b1 = mk.k1().beta();
    const double b2 = mk.k2().beta();
    return [eta, b1, b2](const Vector& e, Matrix& omega) {
      const Eigen::Index l = e.size();
      Vector w = Vector::Zero(l);
      for (Eigen::Index i = 0; i < l; ++i) {
        for (Eigen::Index j = i + 1; j < l; ++j) {
          const double d = e(j) - e(i);
          const double k = eta * gaussian_kernel(b1, d) + (1.0 - eta) * gaussian_kernel(b2, d);
          w(i) += k;
          w(j) += k;
        }
      }
      return normalize_diagonal(std::move(w), omega);
    };
  }
  return [mk](const Vector& e, Matrix& omega) {
    const std::span<const double> span(e.data(), static_cast<std::size_t>(e.size()));
    return normalize_diagonal(criterion::residual_density_weights(span, mk), omega);
  };
}

}  // namespace

void GmmeeConfig::validate() const {
  require(fp_tol > 0.0, "GmmeeConfig: fp_tol must be > 0");
  require(fp_max_iter >= 1, "GmmeeConfig: fp_max_iter must be >= 1");
  require(singularity_eps > 0.0, "GmmeeConfig: singularity_eps must be > 0");
  if (gaussian_closed_form) {
    require(mixture.k1().alpha() == 2.0 && (single_kernel || mixture.k2().alpha() == 2.0),
            "GmmeeConfig: closed-form Gaussian path requires alpha = 2");
  }
}

void MccConfig::validate() const {
  require(sigma > 0.0, "MccConfig: sigma must be > 0");
  require(fp_tol > 0.0, "MccConfig: fp_tol must be > 0");
  require(fp_max_iter >= 1, "MccConfig: fp_max_iter must be >= 1");
}

FilterState gmmee_fixed_point_update(const Prediction& pred, const Vector& y,
                                     const MeasurementSetup& setup, const GmmeeConfig& cfg) {
  cfg.validate();
  const criterion::MixtureKernel mk =
      cfg.single_kernel ? criterion::MixtureKernel(cfg.mixture.k1()) : cfg.mixture;
  RobustOptions opt{cfg.fp_tol, cfg.fp_max_iter, cfg.divergence_norm, cfg.record_cost,
                    [mk](const Vector& e) {
                      return criterion::cost(
                          std::span<const double>(e.data(), static_cast<std::size_t>(e.size())), mk);
                    }};
  return robust_update(pred, y, setup, make_gmmee_weights(cfg), opt);
}

FilterState mcc_fixed_point_update(const Prediction& pred, const Vector& y,
                                   const MeasurementSetup& setup, const MccConfig& cfg) {
  cfg.validate();
  const double two_sigma2 = 2.0 * cfg.sigma * cfg.sigma;
  WeightFn weights = [two_sigma2](const Vector& e, Matrix& omega) {
    Vector w = (-e.array().square() / two_sigma2).exp().matrix();
    return normalize_diagonal(std::move(w), omega);
  };
  RobustOptions opt{cfg.fp_tol, cfg.fp_max_iter, 1e6, false, {}};
  return robust_update(pred, y, setup, weights, opt);
}

FilterState srckf_update(const Prediction& pred, const Vector& y, const MeasurementSetup& setup) {
  const SquareRootFactor s_yy = numerics::tria(hcat(setup.zeta, setup.sqrt_r_nominal.matrix()));
  const Matrix gain = s_yy.solve(setup.p_xy.transpose()).transpose();
  Diagnostics diag;
  diag.innovation = y - setup.y_pred;
  const Vector x = pred.x_pred + gain * diag.innovation;
  const Matrix a = hcat(setup.chi - gain * setup.zeta, gain * setup.sqrt_r_nominal.matrix());
  SquareRootFactor s = [&] {
    try {
      return numerics::tria(a);
    } catch (const RankDeficient&) {
      diag.covariance_repaired = true;
      return numerics::cholesky_lower(numerics::psd_repair(a * a.transpose()));
    }
  }();
  return FilterState{x, std::move(s), std::move(diag)};
}

// ---------------------------------------------------------------------------
// Covariance-form baselines

namespace {

struct Moments {
  Vector mean;
  Matrix cov;
};

SquareRootFactor factor_repaired(const Matrix& p, bool& repaired) {
  const Matrix fixed = numerics::psd_repair(p);
  if (!fixed.isApprox(0.5 * (p + p.transpose()), 0.0)) repaired = true;
  return numerics::cholesky_lower(fixed);
}

}  // namespace

FilterState ckf_step(const FilterState& state, const StepInput& in, const Vector& y,
                     const StateSpaceModel& model) {
  const Eigen::Index n = model.n;
  const auto cubature = CubaturePointSet::make(n);
  const double w = cubature.weight();
  bool repaired = false;

  Matrix pts = cubature.points(state.x_hat, state.sqrt_cov);
  Matrix prop(n, pts.cols());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    prop.col(i) = model.transition(pts.col(i), in.predict_input, in.dt);
  }
  const Vector x_pred = prop.rowwise().mean();
  const Matrix dx = prop.colwise() - x_pred;
  const Matrix p_pred = numerics::psd_repair(w * dx * dx.transpose() + model.q_cov);
  const SquareRootFactor s_pred = factor_repaired(p_pred, repaired);

  pts = cubature.points(x_pred, s_pred);
  Matrix ys(model.m, pts.cols());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) ys.col(i) = model.observation(pts.col(i), in.measure_input);
  const Vector y_pred = ys.rowwise().mean();
  const Matrix dy = ys.colwise() - y_pred;
  const Matrix dxm = pts.colwise() - x_pred;
  const Matrix p_yy = w * dy * dy.transpose() + model.r_cov;
  const Matrix p_xy = w * dxm * dy.transpose();
  const Matrix gain = p_yy.ldlt().solve(p_xy.transpose()).transpose();

  Diagnostics diag;
  diag.innovation = y - y_pred;
  const Vector x = x_pred + gain * diag.innovation;
  const Matrix p = p_pred - gain * p_yy * gain.transpose();
  SquareRootFactor s = factor_repaired(p, repaired);
  diag.covariance_repaired = repaired;
  return FilterState{x, std::move(s), std::move(diag)};
}

FilterState ukf_step(const FilterState& state, const StepInput& in, const Vector& y,
                     const StateSpaceModel& model, const UkfParams& params) {
  const Eigen::Index n = model.n;
  const auto nd = static_cast<double>(n);
  const double lambda = params.alpha * params.alpha * (nd + params.kappa) - nd;
  const double spread = std::sqrt(nd + lambda);
  const Eigen::Index count = 2 * n + 1;
  Vector wm = Vector::Constant(count, 1.0 / (2.0 * (nd + lambda)));
  Vector wc = wm;
  wm(0) = lambda / (nd + lambda);
  wc(0) = wm(0) + (1.0 - params.alpha * params.alpha + params.beta);

  const auto sigma_points = [&](const Vector& mean, const Matrix& s) {
    Matrix pts(n, count);
    pts.col(0) = mean;
    for (Eigen::Index i = 0; i < n; ++i) {
      pts.col(1 + i) = mean + spread * s.col(i);
      pts.col(1 + n + i) = mean - spread * s.col(i);
    }
    return pts;
  };
  const auto weighted_cov = [&](const Matrix& da, const Matrix& db) {
    return (da * wc.asDiagonal() * db.transpose()).eval();
  };
  bool repaired = false;

  Matrix pts = sigma_points(state.x_hat, state.sqrt_cov.matrix());
  Matrix prop(n, count);
  for (Eigen::Index i = 0; i < count; ++i) prop.col(i) = model.transition(pts.col(i), in.predict_input, in.dt);
  const Vector x_pred = prop * wm;
  const Matrix dx = prop.colwise() - x_pred;
  const Matrix p_pred = numerics::psd_repair(weighted_cov(dx, dx) + model.q_cov);
  const SquareRootFactor s_pred = factor_repaired(p_pred, repaired);

  pts = sigma_points(x_pred, s_pred.matrix());
  Matrix ys(model.m, count);
  for (Eigen::Index i = 0; i < count; ++i) ys.col(i) = model.observation(pts.col(i), in.measure_input);
  const Vector y_pred = ys * wm;
  const Matrix dy = ys.colwise() - y_pred;
  const Matrix dxm = pts.colwise() - x_pred;
  const Matrix p_yy = weighted_cov(dy, dy) + model.r_cov;
  const Matrix p_xy = weighted_cov(dxm, dy);
  const Matrix gain = p_yy.ldlt().solve(p_xy.transpose()).transpose();

  Diagnostics diag;
  diag.innovation = y - y_pred;
  const Vector x = x_pred + gain * diag.innovation;
  SquareRootFactor s = factor_repaired(p_pred - gain * p_yy * gain.transpose(), repaired);
  diag.covariance_repaired = repaired;
  return FilterState{x, std::move(s), std::move(diag)};
}

FilterState srckf_step(const FilterState& state, const StepInput& in, const Vector& y,
                       const StateSpaceModel& model) {
  const Prediction pred = srckf_predict(state, in.predict_input, in.dt, model);
  const MeasurementSetup setup = srckf_measurement_setup(pred, in.measure_input, model);
  return srckf_update(pred, y, setup);
}

FilterState mcc_ckf_step(const FilterState& state, const StepInput& in, const Vector& y,
                         const StateSpaceModel& model, const MccConfig& cfg) {
  const Prediction pred = srckf_predict(state, in.predict_input, in.dt, model);
  const MeasurementSetup setup = srckf_measurement_setup(pred, in.measure_input, model);
  return mcc_fixed_point_update(pred, y, setup, cfg);
}

FilterState gmmee_step(const FilterState& state, const StepInput& in, const Vector& y,
                       const StateSpaceModel& model, const GmmeeConfig& cfg) {
  const Prediction pred = srckf_predict(state, in.predict_input, in.dt, model);
  const MeasurementSetup setup = srckf_measurement_setup(pred, in.measure_input, model);
  return gmmee_fixed_point_update(pred, y, setup, cfg);
}

// ---------------------------------------------------------------------------
// Variant selection

WeightForm weight_form_from_string(const std::string& s) {
  if (s == "density") return WeightForm::density;
  if (s == "laplacian") return WeightForm::laplacian;
  throw DomainError("unknown weight form: " + s);
}

std::string to_string(WeightForm f) {
  return f == WeightForm::density ? "density" : "laplacian";
}

FilterKind filter_kind_from_string(const std::string& s) {
  if (s == "ukf") return FilterKind::ukf;
  if (s == "ckf") return FilterKind::ckf;
  if (s == "srckf") return FilterKind::srckf;
  if (s == "mcc-ckf") return FilterKind::mcc_ckf;
  if (s == "mee-ckf") return FilterKind::mee_ckf;
  if (s == "gmee-ckf") return FilterKind::gmee_ckf;
  if (s == "mmee-ckf") return FilterKind::mmee_ckf;
  if (s == "gmmee-srckf") return FilterKind::gmmee_srckf;
  throw DomainError("unknown filter variant: " + s);
}

std::string to_string(FilterKind k) {
  switch (k) {
    case FilterKind::ukf: return "ukf";
    case FilterKind::ckf: return "ckf";
    case FilterKind::srckf: return "srckf";
    case FilterKind::mcc_ckf: return "mcc-ckf";
    case FilterKind::mee_ckf: return "mee-ckf";
    case FilterKind::gmee_ckf: return "gmee-ckf";
    case FilterKind::mmee_ckf: return "mmee-ckf";
    case FilterKind::gmmee_srckf: return "gmmee-srckf";
  }
  return "unknown";
}

const std::vector<FilterKind>& comparison_order() {
  static const std::vector<FilterKind> order{
      FilterKind::ukf,     FilterKind::ckf,      FilterKind::srckf,    FilterKind::mcc_ckf,
      FilterKind::mee_ckf, FilterKind::gmee_ckf, FilterKind::mmee_ckf, FilterKind::gmmee_srckf};
  return order;
}

GmmeeConfig VariantConfig::gmmee_config() const {
  using criterion::GgdKernel;
  using criterion::MixtureKernel;
  GmmeeConfig c;
  c.fp_tol = fp_tol;
  c.fp_max_iter = fp_max_iter;
  c.singularity_eps = singularity_eps;
  c.weight_form = weight_form;
  c.record_cost = record_cost;
  const auto& k = kernels;
  switch (kind) {
    case FilterKind::mee_ckf:
      c.mixture = MixtureKernel(GgdKernel(2.0, k.beta1));
      c.single_kernel = true;
      c.gaussian_closed_form = true;
      break;
    case FilterKind::gmee_ckf:
      c.mixture = MixtureKernel(GgdKernel(k.alpha1, k.beta1));
      c.single_kernel = true;
      break;
    case FilterKind::mmee_ckf:
      c.mixture = MixtureKernel(k.eta, GgdKernel(2.0, k.beta1), GgdKernel(2.0, k.beta2));
      c.gaussian_closed_form = true;
      break;
    default:
      c.mixture = MixtureKernel(k.eta, GgdKernel(k.alpha1, k.beta1), GgdKernel(k.alpha2, k.beta2));
      break;
  }
  return c;
}

MccConfig VariantConfig::mcc_config() const { return MccConfig{mcc_sigma, fp_tol, fp_max_iter}; }

Filter::Filter(StateSpaceModel model, VariantConfig cfg, FilterState init)
    : model_(std::move(model)),
      cfg_(cfg),
      gmmee_(cfg.gmmee_config()),
      mcc_(cfg.mcc_config()),
      sqrt_q_(numerics::cholesky_lower(model_.q_cov)),
      sqrt_r_(numerics::cholesky_lower(model_.r_cov)),
      state_(std::move(init)) {
  model_.validate();
  require(state_.x_hat.size() == model_.n, "Filter: initial state has the wrong dimension");
  gmmee_.validate();
  mcc_.validate();
}

const FilterState& Filter::step(const StepInput& in, const Vector& y) {
  switch (cfg_.kind) {
    case FilterKind::ukf:
      state_ = ukf_step(state_, in, y, model_, cfg_.ukf);
      return state_;
    case FilterKind::ckf:
      state_ = ckf_step(state_, in, y, model_);
      return state_;
    default:
      break;
  }
  const Prediction pred = srckf_predict(state_, in.predict_input, in.dt, model_, sqrt_q_);
  const MeasurementSetup setup = srckf_measurement_setup(pred, in.measure_input, model_, sqrt_r_);
  switch (cfg_.kind) {
    case FilterKind::srckf:
      state_ = srckf_update(pred, y, setup);
      break;
    case FilterKind::mcc_ckf:
      state_ = mcc_fixed_point_update(pred, y, setup, mcc_);
      break;
    default:
      state_ = gmmee_fixed_point_update(pred, y, setup, gmmee_);
      break;
  }
  return state_;
}

FilterState filter_step(const FilterState& state, const StepInput& in, const Vector& y,
                        const StateSpaceModel& model, const VariantConfig& cfg) {
  Filter f(model, cfg, state);
  return f.step(in, y);
}

}  // namespace gmmee::filters
