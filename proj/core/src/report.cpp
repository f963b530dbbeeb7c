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

#include "gmmee/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gmmee/errors.hpp"
#include "json.hpp"

namespace gmmee::report {

using nlohmann::json;

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "plotdata") return Format::plotdata;
  throw ConfigError("unknown report format '" + s + "'");
}

namespace {

json timing_json(const harness::Timing& t) { return {{"max_ms", t.max_ms}, {"mean_ms", t.mean_ms}}; }

json run_json(const harness::MetricsReport& m) {
  return {{"filter", m.filter},
          {"seed", m.seed},
          {"mae", m.mae},
          {"mse", m.mse},
          {"rmse", m.rmse},
          {"max_abs", m.max_abs},
          {"timing", timing_json(m.timing)},
          {"flags",
           {{"iteration_cap", m.iteration_cap_count},
            {"fallback", m.fallback_count},
            {"covariance_repaired", m.covariance_repaired_count}}},
          {"trace",
           {{"t_s", m.t},
            {"soc_true_pct", m.soc_true_pct},
            {"soc_est_pct", m.soc_est_pct},
            {"abs_err_pct", m.abs_err_pct}}}};
}

json quantiles_json(const harness::Quantiles& q) {
  return {{"min", q.min}, {"q1", q.q1}, {"median", q.median}, {"q3", q.q3}, {"max", q.max}};
}

json mc_json(const harness::MonteCarloSummary& s) {
  return {{"filter", s.filter},
          {"trials", s.seeds.size()},
          {"rmse", s.rmse},
          {"seeds", s.seeds},
          {"failed_trials", s.failed_trials},
          {"failures", s.failures},
          {"mean", s.mean},
          {"stddev", s.stddev},
          {"quantiles", quantiles_json(s.box)},
          {"timing", timing_json(s.timing)}};
}

json tune_json(const harness::TuneReport& t) {
  const auto& c = t.search.counters;
  return {{"best",
           {{"eta", t.best.eta},
            {"alpha1", t.best.alpha1},
            {"alpha2", t.best.alpha2},
            {"beta1", t.best.beta1},
            {"beta2", t.best.beta2}}},
          {"fitness", t.frozen_rmse},
          {"history", t.search.history},
          {"evaluations", c.evaluations},
          {"operator_calls",
           {{"tsa", c.tsa_calls}, {"exploratory", c.exploratory_calls}, {"ga", c.ga_calls}}},
          {"wall_s", t.search.wall_s},
          {"frozen_seeds", t.frozen_seeds},
          {"fresh", mc_json(t.fresh)}};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_json(const Report& r) {
  json root;
  root["command"] = r.command;
  root["seed"] = r.seed;
  root["runs"] = json::array();
  for (const auto& m : r.runs) root["runs"].push_back(run_json(m));
  root["monte_carlo"] = json::array();
  for (const auto& s : r.monte_carlo) root["monte_carlo"].push_back(mc_json(s));
  root["tune"] = r.tune ? tune_json(*r.tune) : json(nullptr);
  return root.dump(2) + "\n";
}

std::string render_csv(const Report& r) {
  std::ostringstream os;
  os << "filter,mae,mse,rmse,max_abs,max_ms,mean_ms,iteration_cap,fallback\n";
  for (const auto& m : r.runs) {
    os << m.filter << ',' << num(m.mae) << ',' << num(m.mse) << ',' << num(m.rmse) << ','
       << num(m.max_abs) << ',' << num(m.timing.max_ms) << ',' << num(m.timing.mean_ms) << ','
       << m.iteration_cap_count << ',' << m.fallback_count << '\n';
  }
  if (!r.monte_carlo.empty()) {
    os << "\nfilter,trials,failed,mean,stddev,min,q1,median,q3,max\n";
    for (const auto& s : r.monte_carlo) {
      os << s.filter << ',' << s.seeds.size() << ',' << s.failed_trials.size() << ','
         << num(s.mean) << ',' << num(s.stddev) << ',' << num(s.box.min) << ',' << num(s.box.q1)
         << ',' << num(s.box.median) << ',' << num(s.box.q3) << ',' << num(s.box.max) << '\n';
    }
  }
  return os.str();
}

std::string render_plotdata(const harness::MetricsReport& m) {
  std::ostringstream os;
  os << "step,t_s,soc_true_pct,soc_est_pct,abs_err_pct\n";
  for (std::size_t k = 0; k < m.abs_err_pct.size(); ++k) {
    os << k << ',' << num(m.t[k]) << ',' << num(m.soc_true_pct[k]) << ','
       << num(m.soc_est_pct[k]) << ',' << num(m.abs_err_pct[k]) << '\n';
  }
  return os.str();
}

std::string render_quantiles(const Report& r) {
  std::ostringstream os;
  os << "filter,min,q1,median,q3,max\n";
  for (const auto& s : r.monte_carlo) {
    os << s.filter << ',' << num(s.box.min) << ',' << num(s.box.q1) << ',' << num(s.box.median)
       << ',' << num(s.box.q3) << ',' << num(s.box.max) << '\n';
  }
  return os.str();
}

std::string render_timing_table(const std::vector<harness::MetricsReport>& runs) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-12s %12s %12s\n", "Filter", "MAX (ms)", "MEAN (ms)");
  os << line;
  for (const auto& m : runs) {
    std::snprintf(line, sizeof line, "%-12s %12.4f %12.4f\n", m.filter.c_str(), m.timing.max_ms,
                  m.timing.mean_ms);
    os << line;
  }
  return os.str();
}

Report parse_report_json(const std::string& text) {
  Report r;
  try {
    const json root = json::parse(text);
    r.command = root.at("command").get<std::string>();
    r.seed = root.at("seed").get<std::uint64_t>();
    for (const auto& j : root.at("runs")) {
      harness::MetricsReport m;
      m.filter = j.at("filter").get<std::string>();
      m.seed = j.at("seed").get<std::uint64_t>();
      m.mae = j.at("mae").get<double>();
      m.mse = j.at("mse").get<double>();
      m.rmse = j.at("rmse").get<double>();
      m.max_abs = j.at("max_abs").get<double>();
      m.timing = {j.at("timing").at("max_ms").get<double>(), j.at("timing").at("mean_ms").get<double>()};
      m.iteration_cap_count = j.at("flags").at("iteration_cap").get<int>();
      m.fallback_count = j.at("flags").at("fallback").get<int>();
      m.covariance_repaired_count = j.at("flags").at("covariance_repaired").get<int>();
      const auto& t = j.at("trace");
      m.t = t.at("t_s").get<std::vector<double>>();
      m.soc_true_pct = t.at("soc_true_pct").get<std::vector<double>>();
      m.soc_est_pct = t.at("soc_est_pct").get<std::vector<double>>();
      m.abs_err_pct = t.at("abs_err_pct").get<std::vector<double>>();
      r.runs.push_back(std::move(m));
    }
    for (const auto& j : root.at("monte_carlo")) {
      harness::MonteCarloSummary s;
      s.filter = j.at("filter").get<std::string>();
      s.rmse = j.at("rmse").get<std::vector<double>>();
      s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
      s.failed_trials = j.at("failed_trials").get<std::vector<int>>();
      s.failures = j.at("failures").get<std::vector<std::string>>();
      s.mean = j.at("mean").get<double>();
      s.stddev = j.at("stddev").get<double>();
      const auto& q = j.at("quantiles");
      s.box = {q.at("min").get<double>(), q.at("q1").get<double>(), q.at("median").get<double>(),
               q.at("q3").get<double>(), q.at("max").get<double>()};
      s.timing = {j.at("timing").at("max_ms").get<double>(), j.at("timing").at("mean_ms").get<double>()};
      r.monte_carlo.push_back(std::move(s));
    }
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("malformed report JSON: ") + ex.what());
  }
  return r;
}

std::string rerender(const std::filesystem::path& json_path, const std::string& format) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open " + json_path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const Report r = parse_report_json(ss.str());
  if (format == "timing") return render_timing_table(r.runs);
  return render_csv(r);
}

std::vector<std::filesystem::path> emit_report(const Report& r, Format format,
                                               const std::filesystem::path& path) {
  std::vector<std::filesystem::path> written;
  const auto write = [&](const std::filesystem::path& p, const std::string& text) {
    write_file_atomic(p, text);
    written.push_back(p);
  };
  switch (format) {
    case Format::json:
      write(path, render_json(r));
      break;
    case Format::csv:
      write(path, render_csv(r));
      break;
    case Format::plotdata: {
      const auto stem = path.parent_path() / path.stem();
      const auto ext = path.extension().empty() ? std::string(".csv") : path.extension().string();
      if (r.runs.size() == 1) {
        write(path, render_plotdata(r.runs.front()));
      } else {
        for (const auto& m : r.runs) write(stem.string() + "." + m.filter + ext, render_plotdata(m));
      }
      if (!r.monte_carlo.empty()) write(stem.string() + ".quantiles" + ext, render_quantiles(r));
      break;
    }
  }
  return written;
}

}  // namespace gmmee::report
