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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gmmee/harness.hpp"

namespace gmmee::report {

enum class Format { json, csv, plotdata };

Format format_from_string(const std::string& s);

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<harness::MetricsReport> runs;
  std::vector<harness::MonteCarloSummary> monte_carlo;
  std::optional<harness::TuneReport> tune;
};

std::string render_json(const Report& r);
/// Metric table (runs) followed by a distribution table (Monte Carlo).
std::string render_csv(const Report& r);
/// Per-step error trace of one run.
std::string render_plotdata(const harness::MetricsReport& run);
/// Box-plot quantiles of every Monte Carlo summary.
std::string render_quantiles(const Report& r);

/// Timing table in MAX/MEAN column layout.
std::string render_timing_table(const std::vector<harness::MetricsReport>& runs);

/// Reads a JSON report back. The tune block is not restored.
Report parse_report_json(const std::string& text);

/// Loads a saved JSON report and renders it as "csv" or "timing".
std::string rerender(const std::filesystem::path& json_path, const std::string& format);

/// Writes the report atomically. For plotdata, one file per run is written
/// next to `path` (suffixed by the filter name when there are several runs),
/// plus a quantile file when Monte Carlo data is present. Returns the paths.
std::vector<std::filesystem::path> emit_report(const Report& r, Format format,
                                               const std::filesystem::path& path);

}  // namespace gmmee::report
