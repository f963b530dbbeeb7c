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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gmmee/battery.hpp"
#include "gmmee/filters.hpp"
#include "gmmee/noise.hpp"
#include "gmmee/tsga.hpp"

namespace gmmee {

struct TraceConfig {
  std::string source = "synthetic";  // "synthetic" or "csv"
  std::filesystem::path csv_path;
  battery::ProfileKind profile = battery::ProfileKind::urban_like;
  double duration_s = 3600.0;
  double dt = 1.0;
  double amplitude_a = 3.0;
  double soc0 = 1.0;
  std::uint64_t profile_seed = 7;
  std::string temperature_label = "25C";
};

struct TuneConfig {
  tsga::TsgaConfig tsga;
  int frozen_trials = 3;  // noise realizations averaged inside the fitness
  int fresh_trials = 20;  // re-evaluation of the winner on unseen seeds
};

struct ExperimentConfig {
  battery::EcmParams params;
  std::array<double, battery::OcvCurve::kCoefficients> ocv_coeffs{};
  noise::MixedNoiseSpec noise;
  TraceConfig trace;
  filters::VariantConfig filter;

  std::optional<double> init_soc;  // defaults to the true initial SOC
  std::vector<double> p0_diag{0.01, 0.01, 0.06};
  std::vector<double> q_diag{1e-6, 1e-6, 1e-6};
  std::optional<double> r_var;  // defaults to the base-Gaussian variance
  std::vector<double> truth_q_diag{0.0, 0.0, 0.0};
  double soc_cutoff = 0.1;
  int warmup = 0;

  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 1;
  int threads = 1;

  TuneConfig tune;

  battery::OcvCurve ocv() const;
  double filter_r() const;
  /// Throws ConfigError on any invalid or inconsistent field.
  void validate() const;
};

/// Parses a JSON document. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies a `dotted.key=value` override, the value parsed as JSON when
/// possible and as a bare string otherwise.
void apply_override(std::string& json_text, const std::string& assignment);

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides);

}  // namespace gmmee
