/*
 * Copyright (C) 2026 The gmdd-test Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gmdd/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "gmdd/dataset.hpp"
#include "gmdd/error.hpp"

namespace gmdd {

namespace {

// Names written to CSV come from fixed vocabularies; refuse anything that
// would break the row structure.
const std::string &csv_safe(const std::string &s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos)
    throw ValidationError("value '" + s + "' cannot be written to CSV");
  return s;
}

void flatten(const std::string &prefix, const Json &value, std::ostringstream &out) {
  if (value.is_object()) {
    for (auto it = value.begin(); it != value.end(); ++it)
      flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      flatten(prefix + "[" + std::to_string(i) + "]", value[i], out);
  } else if (value.is_number_float()) {
    out << prefix << ',' << format_real(value.get<double>()) << '\n';
  } else if (value.is_null()) {
    out << prefix << ",\n";
  } else if (value.is_string()) {
    out << prefix << ',' << csv_safe(value.get<std::string>()) << '\n';
  } else {
    out << prefix << ',' << value.dump() << '\n';
  }
}

Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

} // namespace

std::string format_real(double x) {
  if (std::isnan(x))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const Vector &v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(real(v[i]));
  return a;
}

Json to_json(const Matrix &m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(real(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json to_json(const MiTestResult &r) {
  Json j;
  j["statistic"] = real(r.statistic);
  j["df"] = r.df;
  j["p_value"] = real(r.p_value);
  j["delta_hat"] = to_json(r.delta_hat);
  j["spectrum"] = to_json(r.spectrum);
  j["retained_rank"] = r.retained_rank;
  j["elapsed"] = r.elapsed;
  return j;
}

Json to_json(const SpecTestResult &r) {
  Json j;
  j["statistic"] = real(r.statistic);
  j["df"] = r.df;
  j["p_value"] = real(r.p_value);
  j["t_value"] = r.t_value ? real(*r.t_value) : Json(nullptr);
  j["delta_hat"] = to_json(r.delta_hat);
  j["omega_components"] = {{"omega_v", to_json(r.omega.omega_v)},
                           {"xi0", to_json(r.omega.xi0)},
                           {"xi1", to_json(r.omega.xi1)},
                           {"xi2", to_json(r.omega.xi2)}};
  j["spectrum"] = to_json(r.spectrum);
  j["retained_rank"] = r.retained_rank;
  j["beta_hat"] = to_json(r.fit.beta);
  j["elapsed"] = r.elapsed;
  return j;
}

void write_sim_csv(const std::vector<SimRow> &rows, std::ostream &out) {
  out << kSimCsvHeader << '\n';
  for (const auto &r : rows) {
    out << csv_safe(r.dgp) << ',' << csv_safe(r.test) << ',' << r.n << ',' << format_real(r.gamma)
        << ',' << format_real(r.level) << ',' << format_real(r.rate) << ','
        << format_real(r.mc_se) << '\n';
  }
  if (!out)
    throw IoError("failed to write CSV output");
}

std::vector<SimRow> read_sim_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("empty simulation CSV");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kSimCsvHeader)
    throw ValidationError("unexpected simulation CSV header '" + line + "'");
  std::vector<SimRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r")
      continue;
    const auto cells = split_csv_line(line);
    SimRow r;
    double n = 0.0;
    if (cells.size() != 7 || !parse_double(cells[2], n) || !parse_double(cells[3], r.gamma) ||
        !parse_double(cells[4], r.level) || !parse_double(cells[5], r.rate) ||
        !parse_double(cells[6], r.mc_se))
      throw ValidationError("malformed simulation CSV line " + std::to_string(line_no));
    r.dgp = cells[0];
    r.test = cells[1];
    r.n = static_cast<std::size_t>(n);
    rows.push_back(r);
  }
  return rows;
}

void write_timing_csv(const std::vector<TimingRow> &rows, std::ostream &out) {
  out << kTimingCsvHeader << '\n';
  for (const auto &r : rows) {
    out << csv_safe(r.dgp) << ',' << csv_safe(r.test) << ',' << r.n << ',' << r.reps << ','
        << format_real(r.mean_seconds) << ',' << format_real(r.sd_seconds) << ','
        << format_real(r.median_relative) << ',' << format_real(r.iqr_relative) << '\n';
  }
  if (!out)
    throw IoError("failed to write CSV output");
}

Json sim_rows_json(const std::vector<SimRow> &rows) {
  Json a = Json::array();
  for (const auto &r : rows) {
    a.push_back({{"dgp", r.dgp},
                 {"test", r.test},
                 {"n", r.n},
                 {"gamma", r.gamma},
                 {"level", r.level},
                 {"rate", real(r.rate)},
                 {"mc_se", real(r.mc_se)}});
  }
  return a;
}

Json timing_rows_json(const std::vector<TimingRow> &rows) {
  Json a = Json::array();
  for (const auto &r : rows) {
    a.push_back({{"dgp", r.dgp},
                 {"test", r.test},
                 {"n", r.n},
                 {"reps", r.reps},
                 {"mean_seconds", real(r.mean_seconds)},
                 {"sd_seconds", real(r.sd_seconds)},
                 {"median_relative", real(r.median_relative)},
                 {"iqr_relative", real(r.iqr_relative)}});
  }
  return a;
}

std::string json_to_field_csv(const Json &obj) {
  std::ostringstream out;
  out << "field,value\n";
  flatten("", obj, out);
  return out.str();
}

} // namespace gmdd
