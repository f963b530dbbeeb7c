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

// gmmee: command-line front end for simulation, filtering, comparison,
// kernel tuning and Monte Carlo studies.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmmee/config.hpp"
#include "gmmee/errors.hpp"
#include "gmmee/harness.hpp"
#include "gmmee/report.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kNumeric = 4 };

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool needs_seed) {
  cmd->add_option("-c,--config", c.config, "experiment config (JSON)")->required();
  cmd->add_option("--set", c.overrides, "override, e.g. filter.beta1=0.5");
  auto* seed = cmd->add_option("--seed", c.seed, "master seed");
  if (needs_seed) seed->required();
  cmd->add_option("-o,--out", c.out, "output path (stdout when omitted)");
  cmd->add_option("-f,--format", c.format, "json | csv | plotdata")
      ->check(CLI::IsMember({"json", "csv", "plotdata"}));
}

gmmee::ExperimentConfig load(const Common& c) {
  auto overrides = c.overrides;
  overrides.push_back("experiment.seed=" + std::to_string(c.seed));
  return gmmee::load_config(c.config, overrides);
}

void emit(const gmmee::report::Report& r, const Common& c) {
  const auto fmt = gmmee::report::format_from_string(c.format);
  if (c.out.empty()) {
    if (fmt == gmmee::report::Format::json) {
      std::cout << gmmee::report::render_json(r);
    } else if (fmt == gmmee::report::Format::csv) {
      std::cout << gmmee::report::render_csv(r);
    } else {
      for (const auto& run : r.runs) std::cout << gmmee::report::render_plotdata(run);
    }
    return;
  }
  for (const auto& p : gmmee::report::emit_report(r, fmt, c.out)) {
    std::cerr << "wrote " << p.string() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GMMEE-SRCKF battery SOC estimation toolkit"};
  app.require_subcommand(1);

  Common sim_c, run_c, cmp_c, tune_c, mc_c, rep_c;
  std::string csv_out;
  int trials = 0;
  std::vector<std::string> variants;
  std::string report_in;

  auto* sim = app.add_subcommand("simulate", "synthesize a noisy trace as dataset CSV");
  add_common(sim, sim_c, true);
  auto* run = app.add_subcommand("run", "run one filter and report SOC error metrics");
  add_common(run, run_c, true);
  auto* cmp = app.add_subcommand("compare", "run every variant on one shared noisy trace");
  add_common(cmp, cmp_c, true);
  cmp->add_option("--variants", variants, "subset of variants, default all eight");
  auto* tune = app.add_subcommand("tune", "tune kernel parameters with TSGA");
  add_common(tune, tune_c, true);
  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo RMSE distribution");
  add_common(mc, mc_c, true);
  mc->add_option("--trials", trials, "trial count (overrides experiment.trials)");
  auto* rep = app.add_subcommand("report", "re-render a saved JSON report");
  rep->add_option("input", report_in, "report JSON written by another subcommand")->required();
  rep->add_option("-f,--format", rep_c.format, "csv | timing")
      ->check(CLI::IsMember({"csv", "timing"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) {
      const auto cfg = load(sim_c);
      const auto data = gmmee::harness::build_dataset(cfg, cfg.seed);
      if (sim_c.out.empty()) {
        std::cout << gmmee::format_dataset_csv(data);
      } else {
        gmmee::write_dataset_csv(data, sim_c.out);
      }
    } else if (*run) {
      const auto cfg = load(run_c);
      gmmee::report::Report r{"run", cfg.seed, {gmmee::harness::run_experiment(cfg)}, {}, {}};
      emit(r, run_c);
    } else if (*cmp) {
      const auto cfg = load(cmp_c);
      std::vector<gmmee::filters::FilterKind> kinds;
      for (const auto& v : variants) kinds.push_back(gmmee::filters::filter_kind_from_string(v));
      if (kinds.empty()) kinds = gmmee::filters::comparison_order();
      gmmee::report::Report r{"compare", cfg.seed, gmmee::harness::run_comparison(cfg, kinds), {}, {}};
      emit(r, cmp_c);
      std::cerr << gmmee::report::render_timing_table(r.runs);
    } else if (*tune) {
      const auto cfg = load(tune_c);
      gmmee::report::Report r{"tune", cfg.seed, {}, {}, gmmee::harness::tune_kernels(cfg)};
      r.monte_carlo.push_back(r.tune->fresh);
      emit(r, tune_c);
    } else if (*mc) {
      const auto cfg = load(mc_c);
      const int n = trials > 0 ? trials : cfg.trials;
      gmmee::report::Report r{"montecarlo", cfg.seed, {}, {gmmee::harness::monte_carlo(cfg, n)}, {}};
      emit(r, mc_c);
    } else if (*rep) {
      std::cout << gmmee::report::rerender(report_in, rep_c.format);
    }
  } catch (const gmmee::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const gmmee::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const gmmee::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kData;
  } catch (const gmmee::NumericError& e) {
    std::cerr << "numeric breakdown: " << e.what() << '\n';
    return kNumeric;
  } catch (const gmmee::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
