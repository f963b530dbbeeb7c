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

namespace gmmee {

struct DatasetMeta {
  std::string source = "synthetic";
  double dt = 0.0;  // s
  std::string temperature_label;
  std::uint64_t seed = 0;
};

/// Time-aligned battery trace. soc_true may be empty for estimation-only data;
/// u1_true/u2_true are only filled by the simulator.
struct Dataset {
  std::vector<double> t;
  std::vector<double> current;
  std::vector<double> voltage;
  std::vector<double> soc_true;
  std::vector<double> temp_c;
  std::vector<double> u1_true;
  std::vector<double> u2_true;
  DatasetMeta meta;

  std::size_t size() const { return t.size(); }
  bool has_soc_true() const { return !soc_true.empty(); }

  /// Throws DataError when lengths disagree, the trace is shorter than two
  /// samples, or soc_true leaves [0, 1].
  void validate() const;

  /// Keeps the prefix until soc_true first drops below `cutoff`.
  Dataset truncated_at_soc(double cutoff) const;
};

/// Maximum relative deviation of any time step from the mean step.
inline constexpr double kDtJitterTolerance = 1e-9;

/// Reads `t_s,current_a,voltage_v[,soc_true][,temp_c]` (columns in any order).
Dataset load_dataset_csv(const std::filesystem::path& path);
Dataset parse_dataset_csv(const std::string& text, const std::string& source = "csv");

void write_dataset_csv(const Dataset& d, const std::filesystem::path& path);
std::string format_dataset_csv(const Dataset& d);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gmmee
