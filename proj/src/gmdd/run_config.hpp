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

#ifndef GMDD_RUN_CONFIG_HPP
#define GMDD_RUN_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gmdd/dataset.hpp"
#include "gmdd/report.hpp"
#include "gmdd/simulation.hpp"

namespace gmdd {

enum class OutputFormat { Json, Csv };

struct MetricRequest {
  std::string u_col;
  std::vector<std::string> z_cols;
  std::string kernel = "gauss";
  std::string estimator = "ucentered";
};

struct MiRequest {
  std::string u_col;
  std::vector<std::string> z_cols;
  std::optional<std::string> h_col;
  std::vector<std::string> aug_cols;
  std::string kernel = "gauss";
  double iota = kDefaultIota;
  ThresholdMode threshold = ThresholdMode::Absolute;
  bool center = true;
};

struct RegressionRequest {
  std::string y_col;
  std::vector<std::string> x_cols;
  std::vector<std::string> iv_cols;
  bool intercept = false;
  bool standardize_z = false;
};

struct SpecRequest {
  RegressionRequest reg;
  std::string kernel = "gauss";
  std::string mode = "scalar"; // scalar | pair
  std::vector<double> delta_b;
  std::vector<std::string> aug_cols;
  std::optional<std::string> h_col;
  double iota = kDefaultIota;
  ThresholdMode threshold = ThresholdMode::Relative;
  bool center = true;
  bool ignore_estimation_effect = false;
};

struct BootRequest {
  RegressionRequest reg;
  std::string family = "gauss";
  int B = 499;
  std::uint64_t seed = 0;
  std::string multiplier = "mammen";
};

/// Numeric summary alongside the serialized payload.
struct RunOutput {
  std::string payload;
  double statistic = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
  int df = 0;
  std::vector<std::string> diagnostics;
};

/// Columns the request reads from a dataset.
std::vector<std::string> required_columns(const MetricRequest &r);
std::vector<std::string> required_columns(const MiRequest &r);
std::vector<std::string> required_columns(const SpecRequest &r);
std::vector<std::string> required_columns(const BootRequest &r);

RunOutput run_metric(const Dataset &data, const MetricRequest &r, OutputFormat fmt);
RunOutput run_mi(const Dataset &data, const MiRequest &r, OutputFormat fmt);
RunOutput run_spec(const Dataset &data, const SpecRequest &r, OutputFormat fmt);
RunOutput run_spec_boot(const Dataset &data, const BootRequest &r, OutputFormat fmt);
RunOutput run_simulate(const SimConfig &cfg, OutputFormat fmt);
RunOutput run_bench(const SimConfig &cfg, OutputFormat fmt);

/// Parses "a:b:step" into an inclusive grid, or "v1,v2,..." into a list.
std::vector<double> parse_grid(const std::string &text);

/// Executes a JSON run configuration: {"command": ..., options...}. Unknown
/// keys are rejected before anything is computed. When "out" is present the
/// payload is also written to that path.
RunOutput run_config(const std::string &config_json);

} // namespace gmdd

#endif
