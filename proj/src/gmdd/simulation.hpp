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

#ifndef GMDD_SIMULATION_HPP
#define GMDD_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmdd/bootstrap.hpp"
#include "gmdd/dgp.hpp"
#include "gmdd/linalg.hpp"

namespace gmdd {

/// chi2 is the pivotal test; chi2-noest drops the estimation-effect terms
/// (diagnostic only); the rest are bootstrap ICM baselines.
enum class SimTest { Chi2, Chi2NoEst, Gauss, Mdd, Dl, Esc6 };

SimTest parse_sim_test(std::string_view text);
const char *sim_test_name(SimTest t);

struct SimConfig {
  DgpId dgp = DgpId::LS1;
  std::vector<std::size_t> n_grid{400};
  std::vector<double> gamma_grid{0.0};
  std::size_t reps = 1000;
  std::vector<double> levels{0.10, 0.05, 0.01};
  std::vector<SimTest> tests{SimTest::Chi2};
  int B = 499;
  Multiplier multiplier = Multiplier::Mammen;
  std::uint64_t seed = 42;
  double iota = kDefaultIota;
  // Empty: absolute for mean-independence designs, relative for regressions.
  std::optional<ThresholdMode> threshold;
  std::string kernel = "gauss";
  double delta_b = 0.5;  // every entry of delta_b for regression DGPs
  bool augment = true;   // use the DGP's augmentation when it has one
};

/// Outcome of one test in one replication.
struct TestDraw {
  bool ok = false;
  double statistic = 0.0;
  double p_value = 1.0;
  Eigen::Index retained_rank = 0;
  double seconds = 0.0;
  std::string error;
};

/// All tests of one replication, in config order.
struct Replication {
  std::uint64_t seed = 0;
  std::vector<TestDraw> draws;
};

struct SimRow {
  std::string dgp;
  std::string test;
  std::size_t n = 0;
  double gamma = 0.0;
  double level = 0.0;
  double rate = 0.0;
  double mc_se = 0.0;
};

struct TimingRow {
  std::string dgp;
  std::string test;
  std::size_t n = 0;
  std::size_t reps = 0;
  double mean_seconds = 0.0;
  double sd_seconds = 0.0;
  double median_relative = 0.0;
  double iqr_relative = 0.0;
};

struct SimResult {
  std::vector<SimRow> rows;
  std::vector<TimingRow> timing;
  std::size_t reps = 0;
  std::size_t failures = 0;
};

void validate(const SimConfig &cfg);

/// Seed of replication `rep`, shared across gamma values and sample sizes.
std::uint64_t replication_seed(std::uint64_t master, std::size_t rep);

/// Runs every configured test on one generated sample.
Replication run_replication(const SimConfig &cfg, std::size_t n, double gamma, std::size_t rep,
                            bool time_separately = false);

std::vector<Replication> run_replications(const SimConfig &cfg, std::size_t n, double gamma);

/// Rejection rates per (n, gamma, test, level). Failed replications are
/// excluded per test; 1% or more failures abort the run.
SimResult run_size_experiment(const SimConfig &cfg);
SimResult run_power_curve(const SimConfig &cfg);

/// Wall-clock time per test; relative times are per replication against chi2.
SimResult run_timing_benchmark(const SimConfig &cfg);

/// Linear-interpolation sample quantile of unsorted data.
double quantile(std::vector<double> v, double prob);

} // namespace gmdd

#endif
