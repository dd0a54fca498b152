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

#include "gmdd/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gmdd/error.hpp"
#include "gmdd/mi_test.hpp"
#include "gmdd/parallel.hpp"
#include "gmdd/random.hpp"
#include "gmdd/spec_test.hpp"

namespace gmdd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_bootstrap(SimTest t) { return t != SimTest::Chi2 && t != SimTest::Chi2NoEst; }

IcmFamily to_family(SimTest t) {
  switch (t) {
  case SimTest::Gauss:
    return IcmFamily::Gauss;
  case SimTest::Mdd:
    return IcmFamily::Mdd;
  case SimTest::Dl:
    return IcmFamily::Dl;
  default:
    return IcmFamily::Esc6;
  }
}

struct Sample {
  bool mi = false;
  Vector u;                  // MI
  Matrix z;                  // both
  RegressionDesign design;   // regression
};

Sample draw_sample(const SimConfig &cfg, std::size_t n, double gamma, std::uint64_t seed) {
  const Dataset data = generate({cfg.dgp, n, gamma, seed});
  Sample s;
  s.mi = is_mean_independence(cfg.dgp);
  if (s.mi) {
    s.u = data.column("u");
    s.z = data.columns({"z1", "z2"});
  } else {
    s.design = regression_design(cfg.dgp, data);
    s.z = s.design.z;
  }
  return s;
}

TestDraw run_chi2(const SimConfig &cfg, const Sample &s, bool ignore_effect) {
  TestDraw d;
  const KernelSpec k = KernelSpec::parse(cfg.kernel, static_cast<std::size_t>(s.z.cols()));
  if (s.mi) {
    if (ignore_effect)
      throw ValidationError("chi2-noest applies to regression DGPs only");
    VSpec vs;
    vs.h.push_back(default_h(s.z));
    const MiTestResult r = mi_test(s.u, s.z, vs, k, cfg.iota, cfg.threshold.value_or(ThresholdMode::Absolute));
    d.statistic = r.statistic;
    d.p_value = r.p_value;
    d.retained_rank = r.retained_rank;
  } else {
    const PreparedModel model(s.design.model);
    SpecVSpec vs;
    vs.delta_b = Vector::Constant(model.spec().k(), cfg.delta_b);
    if (cfg.augment)
      vs.aug = s.design.aug;
    SpecTestOptions opt;
    opt.iota = cfg.iota;
    opt.threshold = cfg.threshold.value_or(ThresholdMode::Relative);
    opt.ignore_estimation_effect = ignore_effect;
    const SpecTestResult r = spec_test(model, s.design.y, s.z, vs, k, opt);
    d.statistic = r.statistic;
    d.p_value = r.p_value;
    d.retained_rank = r.retained_rank;
  }
  d.ok = true;
  return d;
}

std::vector<BootstrapOutcome> run_boot(const SimConfig &cfg, const Sample &s,
                                       const std::vector<IcmFamily> &families,
                                       std::uint64_t seed) {
  BootstrapConfig bc;
  bc.B = cfg.B;
  bc.multiplier = cfg.multiplier;
  bc.seed = seed;
  if (s.mi)
    return multiplier_bootstrap(s.u, s.z, families, bc);
  const PreparedModel model(s.design.model);
  return wild_bootstrap(model, s.design.y, s.z, families, bc);
}

TestDraw failed(const std::exception &e) {
  TestDraw d;
  d.error = e.what();
  return d;
}

std::vector<std::size_t> failure_counts(const SimConfig &cfg, const std::vector<Replication> &reps) {
  std::vector<std::size_t> count(cfg.tests.size(), 0);
  for (const auto &r : reps) {
    for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
      if (!r.draws[t].ok)
        ++count[t];
    }
  }
  return count;
}

void enforce_failure_budget(const SimConfig &cfg, const std::vector<Replication> &reps,
                            std::size_t n, double gamma) {
  const auto count = failure_counts(cfg, reps);
  for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
    if (count[t] > 0 && 100 * count[t] >= cfg.reps) {
      std::string example;
      for (const auto &r : reps) {
        if (!r.draws[t].ok) {
          example = r.draws[t].error;
          break;
        }
      }
      throw ComputationError(std::string(sim_test_name(cfg.tests[t])) + " failed in " +
                             std::to_string(count[t]) + " of " + std::to_string(cfg.reps) +
                             " replications at n=" + std::to_string(n) +
                             ", gamma=" + std::to_string(gamma) + " (" + example + ")");
    }
  }
}

} // namespace

SimTest parse_sim_test(std::string_view text) {
  static constexpr SimTest all[] = {SimTest::Chi2, SimTest::Chi2NoEst, SimTest::Gauss,
                                    SimTest::Mdd,  SimTest::Dl,        SimTest::Esc6};
  for (SimTest t : all) {
    if (text == sim_test_name(t))
      return t;
  }
  throw ValidationError("unknown test '" + std::string(text) +
                        "' (expected chi2, chi2-noest, gauss, mdd, dl or esc6)");
}

const char *sim_test_name(SimTest t) {
  switch (t) {
  case SimTest::Chi2:
    return "chi2";
  case SimTest::Chi2NoEst:
    return "chi2-noest";
  case SimTest::Gauss:
    return "gauss";
  case SimTest::Mdd:
    return "mdd";
  case SimTest::Dl:
    return "dl";
  case SimTest::Esc6:
    return "esc6";
  }
  return "?";
}

void validate(const SimConfig &cfg) {
  if (cfg.n_grid.empty())
    throw ValidationError("sample-size grid is empty");
  for (std::size_t n : cfg.n_grid) {
    if (n < 5)
      throw ValidationError("sample sizes must be at least 5");
  }
  if (cfg.gamma_grid.empty())
    throw ValidationError("gamma grid is empty");
  for (double g : cfg.gamma_grid) {
    if (!std::isfinite(g))
      throw ValidationError("gamma values must be finite");
  }
  if (cfg.reps < 1)
    throw ValidationError("reps must be at least 1");
  if (cfg.levels.empty())
    throw ValidationError("no significance levels given");
  for (double a : cfg.levels) {
    if (!(a > 0.0 && a <= 1.0))
      throw ValidationError("levels must lie in (0, 1]");
  }
  if (cfg.tests.empty())
    throw ValidationError("no tests requested");
  for (std::size_t i = 0; i < cfg.tests.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.tests[i] == cfg.tests[j])
        throw ValidationError("test listed twice");
    }
    if (cfg.tests[i] == SimTest::Chi2NoEst && is_mean_independence(cfg.dgp))
      throw ValidationError("chi2-noest applies to regression DGPs only");
  }
  if (cfg.B < 1)
    throw ValidationError("B must be at least 1");
  if (!(cfg.iota > 0.0 && cfg.iota < 0.5))
    throw ValidationError("iota must lie in (0, 0.5)");
  if (!std::isfinite(cfg.delta_b) || cfg.delta_b == 0.0)
    throw ValidationError("delta_b must be finite and nonzero");
  KernelSpec::parse(cfg.kernel, 2);
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t rep) {
  return derive_seed(master, rep);
}

Replication run_replication(const SimConfig &cfg, std::size_t n, double gamma, std::size_t rep,
                            bool time_separately) {
  Replication out;
  out.seed = replication_seed(cfg.seed, rep);
  const std::uint64_t boot_seed = derive_seed(out.seed, 1);
  out.draws.resize(cfg.tests.size());

  Sample s;
  try {
    s = draw_sample(cfg, n, gamma, out.seed);
  } catch (const std::exception &e) {
    for (auto &d : out.draws)
      d = failed(e);
    return out;
  }

  std::vector<std::size_t> boot_index;
  for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
    const SimTest test = cfg.tests[t];
    if (is_bootstrap(test)) {
      boot_index.push_back(t);
      continue;
    }
    const auto start = Clock::now();
    try {
      out.draws[t] = run_chi2(cfg, s, test == SimTest::Chi2NoEst);
    } catch (const std::exception &e) {
      out.draws[t] = failed(e);
    }
    out.draws[t].seconds = seconds_since(start);
  }
  if (boot_index.empty())
    return out;

  // Families share refits unless each must be timed on its own.
  std::vector<std::vector<std::size_t>> groups;
  if (time_separately) {
    for (std::size_t t : boot_index)
      groups.push_back({t});
  } else {
    groups.push_back(boot_index);
  }
  for (const auto &group : groups) {
    std::vector<IcmFamily> families;
    for (std::size_t t : group)
      families.push_back(to_family(cfg.tests[t]));
    const auto start = Clock::now();
    try {
      const auto res = run_boot(cfg, s, families, boot_seed);
      const double secs = seconds_since(start);
      for (std::size_t g = 0; g < group.size(); ++g) {
        TestDraw &d = out.draws[group[g]];
        d.ok = true;
        d.statistic = res[g].statistic;
        d.p_value = res[g].p_value;
        d.seconds = secs;
      }
    } catch (const std::exception &e) {
      for (std::size_t t : group)
        out.draws[t] = failed(e);
    }
  }
  return out;
}

std::vector<Replication> run_replications(const SimConfig &cfg, std::size_t n, double gamma) {
  validate(cfg);
  std::vector<Replication> reps(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t r) { reps[r] = run_replication(cfg, n, gamma, r); });
  return reps;
}

SimResult run_size_experiment(const SimConfig &cfg) {
  validate(cfg);
  SimResult result;
  result.reps = cfg.reps;
  for (std::size_t n : cfg.n_grid) {
    for (double gamma : cfg.gamma_grid) {
      const auto reps = run_replications(cfg, n, gamma);
      enforce_failure_budget(cfg, reps, n, gamma);
      const auto fails = failure_counts(cfg, reps);
      for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
        result.failures += fails[t];
        const std::size_t used = cfg.reps - fails[t];
        for (double level : cfg.levels) {
          std::size_t reject = 0;
          for (const auto &r : reps) {
            if (r.draws[t].ok && r.draws[t].p_value <= level)
              ++reject;
          }
          SimRow row;
          row.dgp = dgp_name(cfg.dgp);
          row.test = sim_test_name(cfg.tests[t]);
          row.n = n;
          row.gamma = gamma;
          row.level = level;
          row.rate = static_cast<double>(reject) / static_cast<double>(used);
          row.mc_se = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(used));
          result.rows.push_back(row);
        }
      }
    }
  }
  return result;
}

SimResult run_power_curve(const SimConfig &cfg) { return run_size_experiment(cfg); }

double quantile(std::vector<double> v, double prob) {
  if (v.empty())
    throw ValidationError("quantile of empty data");
  std::sort(v.begin(), v.end());
  const double pos = prob * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

SimResult run_timing_benchmark(const SimConfig &cfg) {
  validate(cfg);
  const auto chi2_it = std::find(cfg.tests.begin(), cfg.tests.end(), SimTest::Chi2);
  const bool have_chi2 = chi2_it != cfg.tests.end();
  const auto chi2_index = static_cast<std::size_t>(chi2_it - cfg.tests.begin());
  const double gamma = cfg.gamma_grid.front();

  SimResult result;
  result.reps = cfg.reps;
  for (std::size_t n : cfg.n_grid) {
    // Sequential so that timings are not disturbed by concurrent work.
    std::vector<Replication> reps;
    for (std::size_t r = 0; r < cfg.reps; ++r)
      reps.push_back(run_replication(cfg, n, gamma, r, true));
    enforce_failure_budget(cfg, reps, n, gamma);

    for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
      std::vector<double> secs, rel;
      for (const auto &r : reps) {
        const TestDraw &d = r.draws[t];
        if (!d.ok)
          continue;
        secs.push_back(d.seconds);
        if (have_chi2 && r.draws[chi2_index].ok && r.draws[chi2_index].seconds > 0.0)
          rel.push_back(d.seconds / r.draws[chi2_index].seconds);
      }
      result.failures += cfg.reps - secs.size();
      TimingRow row;
      row.dgp = dgp_name(cfg.dgp);
      row.test = sim_test_name(cfg.tests[t]);
      row.n = n;
      row.reps = secs.size();
      double mean = 0.0;
      for (double s : secs)
        mean += s;
      mean /= static_cast<double>(secs.size());
      double ss = 0.0;
      for (double s : secs)
        ss += (s - mean) * (s - mean);
      row.mean_seconds = mean;
      row.sd_seconds = secs.size() > 1 ? std::sqrt(ss / static_cast<double>(secs.size() - 1)) : 0.0;
      if (!rel.empty()) {
        row.median_relative = quantile(rel, 0.5);
        row.iqr_relative = quantile(rel, 0.75) - quantile(rel, 0.25);
      } else {
        row.median_relative = std::nan("");
        row.iqr_relative = std::nan("");
      }
      result.timing.push_back(row);
    }
  }
  return result;
}

} // namespace gmdd
