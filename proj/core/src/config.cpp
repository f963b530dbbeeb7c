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

#include "gmmee/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gmmee/errors.hpp"
#include "json.hpp"

namespace gmmee {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& block, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("'" + block + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + block + "." + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& block) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw ConfigError("bad value for '" + block + "." + key + "': " + ex.what());
  }
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out,
                   const std::string& block) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(obj, key, v, block);
  out = v;
}

noise::Distribution parse_distribution(const json& j) {
  check_keys(j, "noise.contaminant", {"type", "mean", "var", "lo", "hi"});
  const std::string type = j.value("type", "gaussian");
  if (type == "gaussian") return noise::GaussianSpec{j.value("mean", 0.0), j.value("var", 1.0)};
  if (type == "laplace") return noise::LaplaceSpec{j.value("mean", 0.0), j.value("var", 1.0)};
  if (type == "uniform") return noise::UniformSpec{j.value("lo", 0.0), j.value("hi", 1.0)};
  throw ConfigError("unknown contaminant type '" + type + "'");
}

void parse_model(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "model", {"r0", "r1", "c1", "r2", "c2", "capacity_ah", "lambda"});
  auto& p = cfg.params;
  read(j, "r0", p.r0, "model");
  read(j, "r1", p.r1, "model");
  read(j, "c1", p.c1, "model");
  read(j, "r2", p.r2, "model");
  read(j, "c2", p.c2, "model");
  read(j, "lambda", p.lambda, "model");
  if (j.contains("capacity_ah")) {
    double ah = 0.0;
    read(j, "capacity_ah", ah, "model");
    p.q_max = battery::EcmParams::from_amp_hours(ah);
  }
}

void parse_ocv(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "ocv", {"coefficients"});
  std::vector<double> c;
  read(j, "coefficients", c, "ocv");
  if (c.empty() || c.size() > cfg.ocv_coeffs.size()) {
    throw ConfigError("ocv.coefficients must hold 1 to 7 values");
  }
  cfg.ocv_coeffs.fill(0.0);
  std::copy(c.begin(), c.end(), cfg.ocv_coeffs.begin());
}

void parse_noise(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "noise", {"c", "scale", "base", "contaminant"});
  read(j, "c", cfg.noise.c, "noise");
  read(j, "scale", cfg.noise.scale, "noise");
  if (j.contains("base")) {
    const json& b = j.at("base");
    check_keys(b, "noise.base", {"mean", "var"});
    read(b, "mean", cfg.noise.base.mean, "noise.base");
    read(b, "var", cfg.noise.base.var, "noise.base");
  }
  if (j.contains("contaminant")) cfg.noise.contaminant = parse_distribution(j.at("contaminant"));
}

void parse_trace(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "trace", {"source", "csv", "profile", "duration_s", "dt", "amplitude_a", "soc0",
                          "profile_seed", "temperature_label"});
  auto& t = cfg.trace;
  read(j, "source", t.source, "trace");
  std::string csv;
  read(j, "csv", csv, "trace");
  if (!csv.empty()) t.csv_path = csv;
  if (j.contains("profile")) {
    try {
      t.profile = battery::profile_kind_from_string(j.at("profile").get<std::string>());
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("trace.profile: ") + ex.what());
    }
  }
  read(j, "duration_s", t.duration_s, "trace");
  read(j, "dt", t.dt, "trace");
  read(j, "amplitude_a", t.amplitude_a, "trace");
  read(j, "soc0", t.soc0, "trace");
  read(j, "profile_seed", t.profile_seed, "trace");
  read(j, "temperature_label", t.temperature_label, "trace");
}

void parse_filter(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "filter", {"variant", "eta", "alpha1", "beta1", "alpha2", "beta2", "fp_tol",
                           "fp_max_iter", "singularity_eps", "weight_form", "mcc_sigma",
                           "record_cost", "ukf"});
  auto& f = cfg.filter;
  try {
    if (j.contains("variant")) f.kind = filters::filter_kind_from_string(j.at("variant").get<std::string>());
    if (j.contains("weight_form")) {
      f.weight_form = filters::weight_form_from_string(j.at("weight_form").get<std::string>());
    }
  } catch (const DomainError& ex) {
    throw ConfigError(std::string("filter: ") + ex.what());
  }
  read(j, "eta", f.kernels.eta, "filter");
  read(j, "alpha1", f.kernels.alpha1, "filter");
  read(j, "beta1", f.kernels.beta1, "filter");
  read(j, "alpha2", f.kernels.alpha2, "filter");
  read(j, "beta2", f.kernels.beta2, "filter");
  read(j, "fp_tol", f.fp_tol, "filter");
  read(j, "fp_max_iter", f.fp_max_iter, "filter");
  read(j, "singularity_eps", f.singularity_eps, "filter");
  read(j, "mcc_sigma", f.mcc_sigma, "filter");
  read(j, "record_cost", f.record_cost, "filter");
  if (j.contains("ukf")) {
    const json& u = j.at("ukf");
    check_keys(u, "filter.ukf", {"alpha", "beta", "kappa"});
    read(u, "alpha", f.ukf.alpha, "filter.ukf");
    read(u, "beta", f.ukf.beta, "filter.ukf");
    read(u, "kappa", f.ukf.kappa, "filter.ukf");
  }
}

void parse_experiment(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "experiment", {"init_soc", "p0_diag", "q_diag", "r_var", "truth_q_diag",
                               "soc_cutoff", "warmup", "seed", "trials", "threads"});
  read_optional(j, "init_soc", cfg.init_soc, "experiment");
  read(j, "p0_diag", cfg.p0_diag, "experiment");
  read(j, "q_diag", cfg.q_diag, "experiment");
  read_optional(j, "r_var", cfg.r_var, "experiment");
  read(j, "truth_q_diag", cfg.truth_q_diag, "experiment");
  read(j, "soc_cutoff", cfg.soc_cutoff, "experiment");
  read(j, "warmup", cfg.warmup, "experiment");
  if (j.contains("seed") && !j.at("seed").is_null()) {
    read(j, "seed", cfg.seed, "experiment");
    cfg.seed_set = true;
  }
  read(j, "trials", cfg.trials, "experiment");
  read(j, "threads", cfg.threads, "experiment");
}

void parse_tsga(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "tsga", {"population", "max_iter", "st", "w_start", "w_end", "seed_frac_lo",
                         "seed_frac_hi", "alpha_bounds", "beta_bounds", "crossover_rate",
                         "mutation_rate", "mutation_sigma_frac", "rng_seed", "mode", "threads",
                         "frozen_trials", "fresh_trials"});
  auto& t = cfg.tune.tsga;
  read(j, "population", t.population, "tsga");
  read(j, "max_iter", t.max_iter, "tsga");
  read(j, "st", t.st, "tsga");
  read(j, "w_start", t.w_start, "tsga");
  read(j, "w_end", t.w_end, "tsga");
  read(j, "seed_frac_lo", t.seed_frac_lo, "tsga");
  read(j, "seed_frac_hi", t.seed_frac_hi, "tsga");
  read(j, "crossover_rate", t.crossover_rate, "tsga");
  read(j, "mutation_rate", t.mutation_rate, "tsga");
  read(j, "mutation_sigma_frac", t.mutation_sigma_frac, "tsga");
  read(j, "rng_seed", t.rng_seed, "tsga");
  read(j, "threads", t.threads, "tsga");
  read(j, "frozen_trials", cfg.tune.frozen_trials, "tsga");
  read(j, "fresh_trials", cfg.tune.fresh_trials, "tsga");
  if (j.contains("mode")) {
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "hybrid") {
      t.mode = tsga::SeedMode::hybrid;
    } else if (mode == "classic") {
      t.mode = tsga::SeedMode::classic;
    } else {
      throw ConfigError("tsga.mode must be 'hybrid' or 'classic'");
    }
  }
  std::array<double, 2> ab{t.bounds[0].lo, t.bounds[0].hi};
  std::array<double, 2> bb{t.bounds[2].lo, t.bounds[2].hi};
  read(j, "alpha_bounds", ab, "tsga");
  read(j, "beta_bounds", bb, "tsga");
  t.bounds = tsga::kernel_bounds(ab[0], ab[1], bb[0], bb[1]);
}

bool is_diag_ok(const std::vector<double>& d, bool allow_zero) {
  if (d.size() != 3) return false;
  for (double v : d) {
    if (!(allow_zero ? v >= 0.0 : v > 0.0)) return false;
  }
  return true;
}

}  // namespace

battery::OcvCurve ExperimentConfig::ocv() const { return battery::OcvCurve(ocv_coeffs); }

double ExperimentConfig::filter_r() const {
  return r_var ? *r_var : noise.base.var * noise.scale * noise.scale;
}

void ExperimentConfig::validate() const {
  try {
    params.validate();
    noise.validate();
    filter.gmmee_config().validate();
    filter.mcc_config().validate();
    tune.tsga.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& ex) {
    throw ConfigError(ex.what());
  }
  if (trace.source != "synthetic" && trace.source != "csv") {
    throw ConfigError("trace.source must be 'synthetic' or 'csv'");
  }
  if (trace.source == "csv" && trace.csv_path.empty()) throw ConfigError("trace.csv is required");
  if (trace.source == "synthetic") {
    if (!(trace.dt > 0.0) || !(trace.duration_s >= 2.0 * trace.dt)) {
      throw ConfigError("trace: need dt > 0 and at least two samples");
    }
    if (!(trace.soc0 >= 0.0 && trace.soc0 <= 1.0)) throw ConfigError("trace.soc0 outside [0, 1]");
  }
  if (init_soc && !(*init_soc >= 0.0 && *init_soc <= 1.0)) {
    throw ConfigError("experiment.init_soc outside [0, 1]");
  }
  if (!is_diag_ok(p0_diag, false)) throw ConfigError("experiment.p0_diag needs 3 positive values");
  if (!is_diag_ok(q_diag, false)) throw ConfigError("experiment.q_diag needs 3 positive values");
  if (!is_diag_ok(truth_q_diag, true)) {
    throw ConfigError("experiment.truth_q_diag needs 3 non-negative values");
  }
  if (!(filter_r() > 0.0)) throw ConfigError("measurement variance must be positive");
  if (!(soc_cutoff >= 0.0 && soc_cutoff < 1.0)) throw ConfigError("experiment.soc_cutoff outside [0, 1)");
  if (warmup < 0) throw ConfigError("experiment.warmup must be >= 0");
  if (trials < 1) throw ConfigError("experiment.trials must be >= 1");
  if (threads < 1) throw ConfigError("experiment.threads must be >= 1");
  if (tune.frozen_trials < 1 || tune.fresh_trials < 1) {
    throw ConfigError("tsga.frozen_trials and tsga.fresh_trials must be >= 1");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  check_keys(root, "config", {"model", "ocv", "noise", "trace", "filter", "experiment", "tsga"});
  ExperimentConfig cfg;
  cfg.tune.tsga.bounds = tsga::kernel_bounds();
  cfg.params = battery::EcmParams{0.015, 0.01, 1000.0, 0.02, 5000.0,
                                  battery::EcmParams::from_amp_hours(3.0), 1.0};
  if (root.contains("model")) parse_model(root.at("model"), cfg);
  if (!root.contains("ocv")) throw ConfigError("config needs an 'ocv' block");
  parse_ocv(root.at("ocv"), cfg);
  if (root.contains("noise")) parse_noise(root.at("noise"), cfg);
  if (root.contains("trace")) parse_trace(root.at("trace"), cfg);
  if (root.contains("filter")) parse_filter(root.at("filter"), cfg);
  if (root.contains("experiment")) parse_experiment(root.at("experiment"), cfg);
  if (root.contains("tsga")) parse_tsga(root.at("tsga"), cfg);
  cfg.validate();
  return cfg;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text(path));
}

void apply_override(std::string& json_text, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  std::string pointer = "/" + key;
  for (auto& ch : pointer) {
    if (ch == '.') ch = '/';
  }
  root[json::json_pointer(pointer)] = value;
  json_text = root.dump();
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  std::string text = read_text(path);
  for (const auto& o : overrides) apply_override(text, o);
  return parse_config(text);
}

}  // namespace gmmee
