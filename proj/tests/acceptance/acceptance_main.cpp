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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmmee/config.hpp"
#include "gmmee/criterion.hpp"
#include "gmmee/filters.hpp"
#include "gmmee/harness.hpp"
#include "gmmee/numerics.hpp"
#include "gmmee/report.hpp"
#include "gmmee/tsga.hpp"

namespace {

using namespace gmmee;
using filters::FilterKind;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ExperimentConfig scenario(const std::string& file, std::vector<std::string> overrides = {}) {
  overrides.push_back("experiment.seed=2026");
  return load_config(fs::path(GMMEE_CONFIG_DIR) / file, overrides);
}

Matrix diag3(const std::vector<double>& d) {
  return Vector::Map(d.data(), 3).asDiagonal();
}

// Full state trajectory of cfg.filter over data, with the harness conventions.
std::vector<Vector> trajectory(const ExperimentConfig& cfg, const Dataset& data) {
  Matrix r(1, 1);
  r(0, 0) = cfg.filter_r();
  const auto model = filters::battery_model(cfg.params, cfg.ocv(), diag3(cfg.q_diag), r);
  Vector x0(3);
  x0 << (cfg.init_soc ? *cfg.init_soc : data.soc_true.front()), data.u1_true.front(),
      data.u2_true.front();
  filters::Filter f(model, cfg.filter, filters::initial_state(x0, diag3(cfg.p0_diag)));
  std::vector<Vector> xs{x0};
  for (std::size_t k = 1; k < data.size(); ++k) {
    Vector y(1);
    y(0) = data.voltage[k];
    xs.push_back(f.step({data.current[k - 1], data.current[k], data.meta.dt}, y).x_hat);
  }
  return xs;
}

double max_gap(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  double g = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) g = std::max(g, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return g;
}

ExperimentConfig with_variant(ExperimentConfig cfg, FilterKind kind, filters::KernelParams k) {
  cfg.filter.kind = kind;
  cfg.filter.kernels = k;
  return cfg;
}

Outcome degeneration() {
  const auto base = scenario("uniform_mixture.json", {"trace.duration_s=500"});
  const auto data = harness::build_dataset(base, harness::trial_seed(base.seed, 0));
  bool ok = true;
  std::ostringstream os;
  const auto check = [&](const char* name, filters::KernelParams g, FilterKind kind,
                         filters::KernelParams k) {
    const auto t0 = std::chrono::steady_clock::now();
    const double gap = max_gap(trajectory(with_variant(base, FilterKind::gmmee_srckf, g), data),
                               trajectory(with_variant(base, kind, k), data));
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && gap <= 1e-12 && s < 10.0;
    os << name << " gap=" << gap << " (" << fmt("%.2f", s) << " s) ";
  };
  check("eta=1/GMEE", {1.0, 3.4, 0.8, 4.3, 3.0}, FilterKind::gmee_ckf, {0.5, 3.4, 0.8, 1.7, 9.0});
  check("alpha=2/MMEE", {0.5, 2.0, 0.8, 2.0, 3.0}, FilterKind::mmee_ckf, {0.5, 5.0, 0.8, 5.0, 3.0});
  check("eta=1,alpha=2/MEE", {1.0, 2.0, 0.8, 3.0, 3.0}, FilterKind::mee_ckf, {0.5, 4.0, 0.8, 4.0, 7.0});
  return {ok, os.str()};
}

Outcome gaussian_limit() {
  const auto base = scenario("uniform_mixture.json",
                             {"trace.duration_s=1001", "noise.c=0", "noise.base.mean=0"});
  const auto data = harness::build_dataset(base, harness::trial_seed(base.seed, 0));
  const auto a = trajectory(with_variant(base, FilterKind::gmmee_srckf, {0.5, 2.0, 1e6, 2.0, 1e6}), data);
  const auto b = trajectory(with_variant(base, FilterKind::srckf, {}), data);
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k](0) - b[k](0)));
  return {gap <= 1e-6 && a.size() >= 1000,
          "steps=" + std::to_string(a.size()) + " max SOC gap=" + fmt("%.3g", gap)};
}

Outcome linear_oracle() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(3, 3), h(1, 3), g(3, 3);
  Vector b(3), d(1), x0(3);
  for (Eigen::Index i = 0; i < 9; ++i) a.data()[i] = 0.3 * n(rng);
  for (Eigen::Index i = 0; i < 9; ++i) g.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < 3; ++i) {
    b(i) = n(rng);
    h(0, i) = n(rng);
    x0(i) = n(rng);
  }
  a += 0.5 * Matrix::Identity(3, 3);
  d(0) = n(rng);
  const Matrix q = 0.1 * g * g.transpose() + 0.05 * Matrix::Identity(3, 3);
  const Matrix r = Matrix::Constant(1, 1, 0.3);
  const Matrix p0 = Matrix::Identity(3, 3);

  const int steps = 201;
  std::vector<double> u(steps), y(steps);
  Vector x = x0;
  for (int k = 0; k < steps; ++k) {
    u[k] = n(rng);
    if (k > 0) x = a * x + b * u[k - 1];
    y[k] = (h * x + d * u[k])(0) + std::sqrt(0.3) * n(rng);
  }
  std::vector<Vector> oracle{x0};
  Vector xe = x0;
  Matrix p = p0;
  for (int k = 1; k < steps; ++k) {
    xe = a * xe + b * u[k - 1];
    p = a * p * a.transpose() + q;
    const Matrix s = h * p * h.transpose() + r;
    const Matrix kg = p * h.transpose() * s.inverse();
    xe += kg * (y[k] - (h * xe + d * u[k])(0));
    p -= kg * s * kg.transpose();
    oracle.push_back(xe);
  }
  const auto model = filters::linear_model(a, b, h, d, q, r);
  bool ok = true;
  std::ostringstream os;
  for (FilterKind kind : {FilterKind::ukf, FilterKind::ckf, FilterKind::srckf}) {
    filters::VariantConfig v;
    v.kind = kind;
    filters::Filter f(model, v, filters::initial_state(x0, p0));
    double gap = 0.0;
    for (int k = 1; k < steps; ++k) {
      Vector yk(1);
      yk(0) = y[k];
      gap = std::max(gap, (f.step({u[k - 1], u[k], 1.0}, yk).x_hat - oracle[k]).cwiseAbs().maxCoeff());
    }
    ok = ok && gap <= 1e-8;
    os << filters::to_string(kind) << "=" << fmt("%.3g", gap) << ' ';
  }
  return {ok, os.str() + "over 200 steps"};
}

Outcome robustness() {
  bool ok = true;
  std::ostringstream os;
  for (const char* file : {"uniform_mixture.json", "laplace_mixture.json"}) {
    const auto cfg = scenario(file);
    const int trials = cfg.trials;
    const auto tuned = harness::tune_kernels(cfg);
    const double gmmee = tuned.fresh.mean;
    const auto& ref = cfg.filter.kernels;
    const double mmee = harness::monte_carlo(with_variant(cfg, FilterKind::mmee_ckf, ref), trials).mean;
    const double mee = harness::monte_carlo(
        with_variant(cfg, FilterKind::mee_ckf, {1.0, 2.0, ref.beta1, 2.0, ref.beta1}), trials).mean;
    const double srckf = harness::monte_carlo(with_variant(cfg, FilterKind::srckf, ref), trials).mean;
    const bool order = gmmee < mmee && mmee < mee && mee < srckf;
    ok = ok && order && gmmee < 0.5;
    const auto& b = tuned.best;
    os << file << ": gmmee=" << fmt("%.4f", gmmee) << " mmee=" << fmt("%.4f", mmee)
       << " mee=" << fmt("%.4f", mee) << " srckf=" << fmt("%.4f", srckf)
       << (order ? " order ok" : " order violated") << " tuned(a1,a2,b1,b2)=(" << fmt("%.3g", b.alpha1)
       << "," << fmt("%.3g", b.alpha2) << "," << fmt("%.3g", b.beta1) << "," << fmt("%.3g", b.beta2)
       << "); ";
  }
  return {ok, os.str()};
}

Outcome tsga_vs_manual() {
  int wins = 0;
  std::ostringstream os;
  for (std::uint64_t master = 1; master <= 10; ++master) {
    auto cfg = scenario("uniform_mixture.json");
    cfg.seed = master;
    cfg.tune.tsga.rng_seed = master;
    const auto tuned = harness::tune_kernels(cfg);
    const double manual =
        harness::monte_carlo(with_variant(cfg, FilterKind::gmmee_srckf, {0.5, 2.5, 1.0, 2.5, 1.0}),
                             cfg.tune.fresh_trials)
            .mean;
    const bool win = tuned.fresh.mean < manual;
    wins += win ? 1 : 0;
    os << fmt("%.4f", tuned.fresh.mean) << (win ? "<" : ">=") << fmt("%.4f", manual) << ' ';
  }
  return {wins >= 8, "wins=" + std::to_string(wins) + "/10 [tuned vs manual] " + os.str()};
}

double sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

tsga::TsgaConfig sphere_cfg(int population, int iters, std::uint64_t seed) {
  tsga::TsgaConfig cfg;
  cfg.population = population;
  cfg.max_iter = iters;
  cfg.bounds.assign(4, tsga::Bound{-5.0, 5.0, false});
  cfg.rng_seed = seed;
  return cfg;
}

Outcome tsga_sphere() {
  int hits = 0;
  bool monotone = true;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = tsga::optimize(sphere, sphere_cfg(20, 100, seed));
    hits += r.best.fitness < 1e-3 ? 1 : 0;
    worst = std::max(worst, r.best.fitness);
    for (std::size_t k = 1; k < r.history.size(); ++k) monotone = monotone && r.history[k] <= r.history[k - 1];
  }
  return {hits == 10 && monotone, "hits=" + std::to_string(hits) + "/10 worst=" + fmt("%.3g", worst) +
                                      (monotone ? " history monotone" : " history NOT monotone")};
}

Outcome tsga_trends() {
  std::vector<double> means;
  for (int pop : {10, 20, 40}) {
    double m = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) m += tsga::optimize(sphere, sphere_cfg(pop, 20, seed)).best.fitness / 20.0;
    means.push_back(m);
  }
  auto cfg = sphere_cfg(20, 30, 3);
  cfg.st = 1.0;
  const long ga = tsga::optimize(sphere, cfg).counters.ga_calls;
  const bool ok = means[0] > means[1] && means[1] > means[2] && ga == 0;
  return {ok, "mean best N=10/20/40: " + fmt("%.3g", means[0]) + " " + fmt("%.3g", means[1]) + " " +
                  fmt("%.3g", means[2]) + " (20 iterations, 20 seeds); ST=1 ga_calls=" + std::to_string(ga)};
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

Outcome integrity() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 8);
  double chol = 0.0, gram = 0.0, norm = 0.0, grad = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const int d = dim(rng);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = n(rng);
    const Matrix p = g * g.transpose() + 0.1 * Matrix::Identity(d, d);
    chol = std::max(chol, (numerics::cholesky_lower(p).reconstruct() - p).norm() / p.norm());
    Matrix a(d, d + dim(rng));
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
    const Matrix aat = a * a.transpose();
    gram = std::max(gram, (numerics::tria(a).reconstruct() - aat).norm() / aat.norm());
  }
  for (double alpha : {1.0, 1.5, 2.0, 3.37, 4.35}) {
    for (double beta : {1e-4, 1.0, 10.0}) {
      const criterion::GgdKernel k(alpha, beta);
      const auto f = [&](double u) { return beta * criterion::ggd_density(k, u * beta); };
      const double cut = std::pow(50.0, 1.0 / alpha);
      const double total = 2.0 * simpson(f, 0.0, cut, f(0.0), f(0.5 * cut), f(cut),
                                         cut / 6.0 * (f(0.0) + 4.0 * f(0.5 * cut) + f(cut)), 1e-12, 50);
      norm = std::max(norm, std::abs(total - 1.0));
    }
  }
  std::uniform_real_distribution<double> alpha(2.0, 4.5), beta(0.5, 2.0), eta(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const criterion::MixtureKernel mk(eta(rng), criterion::GgdKernel(alpha(rng), beta(rng)),
                                      criterion::GgdKernel(alpha(rng), beta(rng)));
    std::vector<double> e(4);
    for (auto& v : e) v = n(rng);
    const Vector an = criterion::cost_gradient(e, mk);
    Vector fd(4);
    for (int i = 0; i < 4; ++i) {
      auto ep = e, em = e;
      ep[i] += 1e-5;
      em[i] -= 1e-5;
      fd(i) = (criterion::cost(ep, mk) - criterion::cost(em, mk)) / 2e-5;
    }
    grad = std::max(grad, (an - fd).norm() / std::max(fd.norm(), 1e-12));
  }
  const bool ok = chol <= 1e-10 && gram <= 1e-10 && norm <= 1e-6 && grad <= 1e-6;
  return {ok, "cholesky=" + fmt("%.2g", chol) + " tria=" + fmt("%.2g", gram) + " ggd=" + fmt("%.2g", norm) +
                  " gradient=" + fmt("%.2g", grad) + " (relative)"};
}

Outcome initial_offset() {
  bool ok = true;
  std::ostringstream os;
  for (double soc : {0.9, 0.8, 0.7}) {
    auto cfg = scenario("uniform_mixture.json");
    cfg.init_soc = soc;
    const auto rep = harness::run_experiment(cfg);
    const std::size_t n = rep.abs_err_pct.size(), dec = n / 10;
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < dec; ++k) {
      first += rep.abs_err_pct[k] / dec;
      last += rep.abs_err_pct[n - dec + k] / dec;
    }
    const double ratio = first / last;
    ok = ok && ratio >= 10.0;
    os << fmt("%.0f%%", 100 * soc) << " ratio=" << fmt("%.1f", ratio) << ' ';
  }
  return {ok, os.str()};
}

Outcome timing() {
  const auto cfg = scenario("uniform_mixture.json");
  const auto rows = harness::run_comparison(cfg, filters::comparison_order());
  const std::string table = report::render_timing_table(rows);
  std::printf("%s", table.c_str());
  bool ok = table.find("MAX (ms)") != std::string::npos && table.find("MEAN (ms)") != std::string::npos;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.timing.mean_ms);
  ok = ok && worst < 100.0;
  return {ok, "worst mean per-step " + fmt("%.4f", worst) + " ms vs 100 ms sampling period"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"degeneration identities", degeneration},
      {"gaussian-limit consistency", gaussian_limit},
      {"linear-gaussian exactness", linear_oracle},
      {"robustness ordering", robustness},
      {"tsga vs manual kernels", tsga_vs_manual},
      {"tsga sphere sanity", tsga_sphere},
      {"tsga control-parameter trends", tsga_trends},
      {"numerical integrity", integrity},
      {"initial-offset convergence", initial_offset},
      {"timing profile", timing},
  };
  const double limits[] = {30, 10, 10, 900, 1800, 60, 60, 600, 600, 600};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s >= limits[i]) {
      o.pass = false;
      o.detail += " runtime over budget";
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str(), s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
