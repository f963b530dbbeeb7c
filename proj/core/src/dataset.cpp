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

#include "gmmee/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "gmmee/errors.hpp"

namespace gmmee {

void Dataset::validate() const {
  const std::size_t n = t.size();
  if (n < 2) throw DataError("dataset: at least two samples required");
  if (current.size() != n || voltage.size() != n) throw DataError("dataset: trace lengths differ");
  if (!soc_true.empty() && soc_true.size() != n) throw DataError("dataset: soc_true length differs");
  if (!temp_c.empty() && temp_c.size() != n) throw DataError("dataset: temp_c length differs");
  for (double s : soc_true) {
    if (!(s >= 0.0 && s <= 1.0)) throw DataError("dataset: soc_true outside [0, 1]");
  }
}

Dataset Dataset::truncated_at_soc(double cutoff) const {
  if (soc_true.empty() || cutoff <= 0.0) return *this;
  std::size_t keep = soc_true.size();
  for (std::size_t i = 0; i < soc_true.size(); ++i) {
    if (soc_true[i] < cutoff) {
      keep = i;
      break;
    }
  }
  Dataset out = *this;
  const auto cut = [keep](std::vector<double>& v) {
    if (v.size() > keep) v.resize(keep);
  };
  cut(out.t);
  cut(out.current);
  cut(out.voltage);
  cut(out.soc_true);
  cut(out.temp_c);
  cut(out.u1_true);
  cut(out.u2_true);
  return out;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw ParseError("dataset csv: cannot parse '" + cell + "' as a number", line);
  }
  return v;
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(trim(line));
      break;
    }
  }
  if (header.empty()) throw SchemaError("dataset csv: missing header");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"t_s", "current_a", "voltage_v"}) {
    if (!col.contains(required)) {
      throw SchemaError(std::string("dataset csv: missing required column '") + required + "'");
    }
  }
  const bool has_soc = col.contains("soc_true");
  const bool has_temp = col.contains("temp_c");

  Dataset d;
  d.meta.source = source;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto cells = split(row);
    if (cells.size() != header.size()) {
      throw ParseError("dataset csv: expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(cells.size()),
                       line_no);
    }
    d.t.push_back(parse_number(cells[col["t_s"]], line_no));
    d.current.push_back(parse_number(cells[col["current_a"]], line_no));
    d.voltage.push_back(parse_number(cells[col["voltage_v"]], line_no));
    if (has_soc) d.soc_true.push_back(parse_number(cells[col["soc_true"]], line_no));
    if (has_temp) d.temp_c.push_back(parse_number(cells[col["temp_c"]], line_no));
  }
  if (d.t.size() < 2) throw DataError("dataset csv: at least two rows required");

  const double span = d.t.back() - d.t.front();
  const double dt = span / static_cast<double>(d.t.size() - 1);
  if (!(dt > 0.0)) throw JitterError("dataset csv: time column is not increasing");
  for (std::size_t i = 1; i < d.t.size(); ++i) {
    const double step = d.t[i] - d.t[i - 1];
    if (std::abs(step - dt) > kDtJitterTolerance * dt) {
      throw JitterError("dataset csv: non-uniform time step at row " + std::to_string(i + 1));
    }
  }
  d.meta.dt = dt;
  d.validate();
  return d;
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open dataset: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_dataset_csv(ss.str(), path.filename().string());
}

std::string format_dataset_csv(const Dataset& d) {
  std::ostringstream out;
  out.precision(17);
  out << "t_s,current_a,voltage_v";
  if (d.has_soc_true()) out << ",soc_true";
  if (!d.temp_c.empty()) out << ",temp_c";
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << d.t[i] << ',' << d.current[i] << ',' << d.voltage[i];
    if (d.has_soc_true()) out << ',' << d.soc_true[i];
    if (!d.temp_c.empty()) out << ',' << d.temp_c[i];
    out << '\n';
  }
  return out.str();
}

void write_dataset_csv(const Dataset& d, const std::filesystem::path& path) {
  write_file_atomic(path, format_dataset_csv(d));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << contents;
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

}  // namespace gmmee
