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

// Acceptance suite. Prints one PASS or FAIL line per criterion AC1..AC10.
// Criteria can be selected by name on the command line; default is all.
// Exit status is 1 when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gmdd/distributions.hpp"
#include "gmdd/dgp.hpp"
#include "gmdd/estimators.hpp"
#include "gmdd/kernels.hpp"
#include "gmdd/metric.hpp"
#include "gmdd/mi_test.hpp"
#include "gmdd/random.hpp"
#include "gmdd/simulation.hpp"
#include "gmdd/spec_test.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

using namespace gmdd;

struct Verdict {
  bool pass = true;
  std::string summary;
};

// Published size tables: rate[n index][level index] with levels 10%, 5%, 1%.
using SizeTable = std::map<std::size_t, std::vector<double>>;

const std::vector<double> kLevels{0.10, 0.05, 0.01};

double rate_of(const SimResult &r, const char *test, std::size_t n, double level, double gamma = 0.0) {
  for (const auto &row : r.rows)
    if (row.test == test && row.n == n && row.level == level && row.gamma == gamma)
      return row.rate;
  return std::nan("");
}

const SimRow *row_of(const SimResult &r, const char *test, std::size_t n, double level,
                     double gamma) {
  for (const auto &row : r.rows)
    if (row.test == test && row.n == n && row.level == level && row.gamma == gamma)
      return &row;
  return nullptr;
}

// Compares every (n, level) cell of a size experiment with a table.
void compare_sizes(const SimResult &r, const char *test, const std::string &label,
                   const SizeTable &table, double tol, Verdict &v) {
  double worst = 0.0;
  for (const auto &[n, targets] : table) {
    for (std::size_t l = 0; l < kLevels.size(); ++l) {
      const double got = rate_of(r, test, n, kLevels[l]);
      const double gap = std::fabs(got - targets[l]);
      const bool ok = gap <= tol;
      std::printf("    %s n=%zu level=%.2f rate=%.3f target=%.3f gap=%.3f %s\n", label.c_str(), n,
                  kLevels[l], got, targets[l], gap, ok ? "ok" : "out");
      worst = std::max(worst, std::isfinite(gap) ? gap : 1.0);
      v.pass = v.pass && ok;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s worst gap %.3f (tol %.3f); ", label.c_str(), worst, tol);
  v.summary += buf;
}

// Runs one sample size at a time so that an aborted cell does not hide the
// others. Aborted cells stay missing and count as failures.
SimResult sizes_per_n(SimConfig cfg, Verdict &v) {
  SimResult all;
  const auto grid = cfg.n_grid;
  for (std::size_t n : grid) {
    cfg.n_grid = {n};
    try {
      const SimResult r = run_size_experiment(cfg);
      all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
      all.failures += r.failures;
      if (r.failures > 0)
        std::printf("    %s n=%zu: %zu failed replication(s) excluded\n", dgp_name(cfg.dgp), n,
                    r.failures);
    } catch (const std::exception &e) {
      std::printf("    %s n=%zu aborted: %s\n", dgp_name(cfg.dgp), n, e.what());
      v.pass = false;
    }
  }
  return all;
}

SimConfig size_config(DgpId dgp, std::vector<std::size_t> n_grid, std::size_t reps,
                      std::vector<SimTest> tests) {
  SimConfig cfg;
  cfg.dgp = dgp;
  cfg.n_grid = std::move(n_grid);
  cfg.reps = reps;
  cfg.levels = kLevels;
  cfg.tests = std::move(tests);
  return cfg;
}

Verdict ac1() {
  const SizeTable ls1{{200, {0.093, 0.045, 0.010}},
                      {400, {0.094, 0.044, 0.006}},
                      {600, {0.097, 0.045, 0.009}},
                      {800, {0.087, 0.046, 0.015}}};
  const SizeTable ls2{{200, {0.089, 0.047, 0.006}},
                      {400, {0.087, 0.041, 0.005}},
                      {600, {0.097, 0.043, 0.008}},
                      {800, {0.088, 0.047, 0.011}}};
  Verdict v;
  for (const auto &[dgp, table] : {std::pair{DgpId::LS1, ls1}, std::pair{DgpId::LS2, ls2}}) {
    const auto r = sizes_per_n(size_config(dgp, {200, 400, 600, 800}, 1000, {SimTest::Chi2}), v);
    compare_sizes(r, "chi2", dgp_name(dgp), table, 0.02, v);
  }
  return v;
}

Verdict ac2() {
  const SizeTable gauss{{200, {0.095, 0.041, 0.006}}, {400, {0.091, 0.050, 0.006}}};
  const SizeTable mdd{{200, {0.083, 0.033, 0.009}}, {400, {0.081, 0.045, 0.005}}};
  SimConfig cfg = size_config(DgpId::LS1, {200, 400}, 1000, {SimTest::Gauss, SimTest::Mdd});
  cfg.B = 499;
  Verdict v;
  const auto r = sizes_per_n(cfg, v);
  compare_sizes(r, "gauss", "Gauss", gauss, 0.02, v);
  compare_sizes(r, "mdd", "MDD", mdd, 0.02, v);
  return v;
}

Verdict ac3() {
  const SizeTable chi2{{200, {0.083, 0.042, 0.008}},
                       {400, {0.091, 0.050, 0.011}},
                       {600, {0.109, 0.057, 0.014}},
                       {800, {0.109, 0.060, 0.008}},
                       {1000, {0.110, 0.062, 0.013}}};
  Verdict v;
  const auto r =
      sizes_per_n(size_config(DgpId::MI1, {200, 400, 600, 800, 1000}, 1000, {SimTest::Chi2}), v);
  compare_sizes(r, "chi2", "MI1", chi2, 0.02, v);
  return v;
}

Verdict ac4() {
  Verdict v;
  double worst = 0.0;
  for (Eigen::Index n = 4; n <= 10; ++n) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const std::uint64_t seed = 1000 * static_cast<std::uint64_t>(n) + s;
      const Vector u = testing::normal_vector(n, seed);
      const Matrix z = testing::normal_matrix(n, 2, seed + 500000);
      const KernelSpec k = s % 2 == 0 ? KernelSpec::gauss(2) : KernelSpec::mdd(2);
      const double gap = std::fabs(gmdd_u_centered(u, z, k) - oracle::fourth_order_gmdd(u, z, k));
      worst = std::max(worst, gap);
    }
  }
  v.pass = worst <= 1e-10;
  char buf[128];
  std::snprintf(buf, sizeof buf, "350 samples, max |diff| %.3g (tol 1e-10)", worst);
  v.summary = buf;
  return v;
}

Verdict ac5() {
  Verdict v;
  const int reps = 50000;
  const Eigen::Index n = 8;
  const std::vector<std::pair<std::uint64_t, std::size_t>> laws{{11, 1}, {12, 1}, {13, 2}, {14, 2},
                                                                {15, 1}};
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const auto law = oracle::random_law(laws[li].first, false, laws[li].second);
    const KernelSpec k = li % 2 == 0 ? KernelSpec::gauss(laws[li].second)
                                     : KernelSpec::mdd(laws[li].second);
    const double target = population_gmdd_discrete(law.atoms, k);
    Rng rng(derive_seed(777, li));
    double sum = 0.0, sum2 = 0.0;
    Vector u(n);
    Matrix z(n, static_cast<Eigen::Index>(laws[li].second));
    for (int r = 0; r < reps; ++r) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto &a = law.atoms[law.draw(rng)];
        u[i] = a.u;
        for (Eigen::Index c = 0; c < z.cols(); ++c)
          z(i, c) = a.z[static_cast<std::size_t>(c)];
      }
      const double est = gmdd_u_centered(u, z, k);
      sum += est;
      sum2 += est * est;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1.0));
    const bool ok = std::fabs(mean - target) <= 3.0 * se;
    std::printf("    law %zu (%s, dim %zu): mean %.6f population %.6f se %.6f z %.2f %s\n", li,
                k.name().c_str(), laws[li].second, mean, target, se, (mean - target) / se,
                ok ? "ok" : "out");
    v.pass = v.pass && ok;
  }
  v.summary = "5 discrete laws, 50000 reps of n=8, within 3 MC SEs";
  return v;
}

Verdict ac6() {
  SimConfig cfg = size_config(DgpId::LS1, {800}, 2000, {SimTest::Chi2});
  const auto reps = run_replications(cfg, 800, 0.0);
  std::vector<double> t;
  for (const auto &r : reps)
    if (r.draws[0].ok)
      t.push_back(r.draws[0].statistic);
  std::sort(t.begin(), t.end());
  double ks = 0.0;
  const double m = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double f = chi2_cdf(t[i], 1.0);
    ks = std::max({ks, (i + 1.0) / m - f, f - i / m});
  }
  Verdict v;
  v.pass = ks < 0.05 && t.size() == reps.size();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu statistics, KS distance to chi2(1) %.4f (bound 0.05)",
                t.size(), ks);
  v.summary = buf;
  return v;
}

Verdict ac7() {
  double mi_neg = 0.0, spec_neg = 0.0, mi_perm = 0.0, spec_perm = 0.0, t2 = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 400 + 50 * static_cast<std::size_t>(s % 4);
    // Mean independence, pair V.
    const Dataset mi = generate({DgpId::MI1, n, 0.0, 300 + s});
    const Vector u = mi.column("u");
    const Matrix z = mi.columns({"z1", "z2"});
    VSpec vs;
    vs.h.push_back(default_h(z));
    const KernelSpec k = KernelSpec::gauss(2);
    const auto a = mi_test(u, z, vs, k);
    const auto b = mi_test(u, z, vs, k.negated());
    mi_neg = std::max({mi_neg, std::fabs(a.statistic - b.statistic), std::fabs(a.p_value - b.p_value)});

    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(900 + s);
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * (i + 1.0))]);
    Vector up(n);
    Matrix zp(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      up[i] = u[perm[i]];
      zp.row(i) = z.row(perm[i]);
    }
    VSpec vsp;
    vsp.h.push_back(default_h(zp));
    const auto c = mi_test(up, zp, vsp, k);
    mi_perm = std::max({mi_perm, std::fabs(a.statistic - c.statistic), std::fabs(a.p_value - c.p_value)});

    // Specification test, scalar V.
    const DgpId dgp = s % 2 == 0 ? DgpId::LS2 : DgpId::LS5;
    const Dataset reg = generate({dgp, n, 0.3, 500 + s});
    const RegressionDesign d = regression_design(dgp, reg);
    const PreparedModel model(d.model);
    SpecVSpec sv;
    sv.aug = d.aug;
    const auto p = spec_test(model, d.y, d.z, sv, k);
    const auto q = spec_test(model, d.y, d.z, sv, k.negated());
    spec_neg = std::max({spec_neg, std::fabs(p.statistic - q.statistic), std::fabs(p.p_value - q.p_value)});
    if (p.t_value)
      t2 = std::max(t2, std::fabs(p.statistic - *p.t_value * *p.t_value));
    else
      t2 = 1.0;

    ModelSpec ms = d.model;
    Vector yp(n);
    Matrix zr(n, d.z.cols());
    for (std::size_t i = 0; i < n; ++i) {
      yp[i] = d.y[perm[i]];
      zr.row(i) = d.z.row(perm[i]);
      ms.x.row(i) = d.model.x.row(perm[i]);
      if (ms.instruments.size() > 0)
        ms.instruments.row(i) = d.model.instruments.row(perm[i]);
    }
    SpecVSpec svp;
    if (d.aug) {
      Vector ap(n);
      for (std::size_t i = 0; i < n; ++i)
        ap[i] = (*d.aug)[perm[i]];
      svp.aug = ap;
    }
    const auto w = spec_test(PreparedModel(ms), yp, zr, svp, k);
    spec_perm = std::max({spec_perm, std::fabs(p.statistic - w.statistic), std::fabs(p.p_value - w.p_value)});
  }
  Verdict v;
  v.pass = mi_neg <= 1e-10 && spec_neg <= 1e-10 && mi_perm <= 1e-10 && spec_perm <= 1e-10 &&
           t2 <= 1e-12;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "K->-K: mi %.2g spec %.2g; permutation: mi %.2g spec %.2g (tol 1e-10); "
                "|T - t^2| %.2g (tol 1e-12)",
                mi_neg, spec_neg, mi_perm, spec_perm, t2);
  v.summary = buf;
  return v;
}

Verdict ac8() {
  SimConfig cfg = size_config(DgpId::MI1, {800}, 500, {SimTest::Chi2});
  const auto reps = run_replications(cfg, 800, 0.0);
  std::size_t one = 0;
  for (const auto &r : reps)
    one += r.draws[0].ok && r.draws[0].retained_rank == 1 ? 1 : 0;
  const double share = static_cast<double>(one) / static_cast<double>(reps.size());
  Verdict v;
  v.pass = share >= 0.95;
  char buf[128];
  std::snprintf(buf, sizeof buf, "retained rank 1 in %zu of %zu replications (%.3f, need 0.95)",
                one, reps.size(), share);
  v.summary = buf;
  return v;
}

// Power must not fall along the grid, except for one drop within 2 MC SEs.
bool monotone(const std::vector<const SimRow *> &rows, std::string &note) {
  int inversions = 0;
  bool small = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double drop = rows[i - 1]->rate - rows[i]->rate;
    if (drop > 0.0) {
      ++inversions;
      const double se = std::hypot(rows[i - 1]->mc_se, rows[i]->mc_se);
      small = small && drop <= 2.0 * se;
      note += " inversion at gamma=" + std::to_string(rows[i]->gamma);
    }
  }
  return inversions == 0 || (inversions == 1 && small);
}

Verdict ac9() {
  Verdict v;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i)
    grid.push_back(i / 10.0);
  const double level = 0.05;
  for (DgpId dgp : {DgpId::LS2, DgpId::LS4, DgpId::LS5, DgpId::MI2, DgpId::MI3, DgpId::LS3}) {
    SimConfig cfg = size_config(dgp, {400}, 1000, {SimTest::Chi2});
    cfg.levels = {level};
    cfg.gamma_grid = grid;
    SimResult r;
    try {
      r = run_power_curve(cfg);
    } catch (const std::exception &e) {
      std::printf("    %s aborted: %s out\n", dgp_name(dgp), e.what());
      std::fflush(stdout);
      v.pass = false;
      continue;
    }
    std::vector<const SimRow *> rows;
    std::string curve;
    for (double g : grid) {
      rows.push_back(row_of(r, "chi2", 400, level, g));
      char buf[16];
      std::snprintf(buf, sizeof buf, " %.3f", rows.back()->rate);
      curve += buf;
    }
    bool ok;
    std::string note;
    if (dgp == DgpId::LS3) {
      const double size = rows.front()->rate;
      ok = std::fabs(size - level) <= 0.02 && rows.back()->rate > size;
      note = " size gap " + std::to_string(std::fabs(size - level));
    } else {
      ok = monotone(rows, note);
    }
    std::printf("    %s power at 5%% over gamma 0:1:0.1:%s%s %s\n", dgp_name(dgp), curve.c_str(),
                note.c_str(), ok ? "ok" : "out");
    std::fflush(stdout);
    v.pass = v.pass && ok;
  }
  v.summary = "chi2 test, n=400, 1000 reps per gamma; LS2 LS4 LS5 MI2 MI3 monotone, LS3 size and power";
  return v;
}

Verdict ac10() {
  SimConfig cfg = size_config(DgpId::LS1, {800}, 50,
                              {SimTest::Chi2, SimTest::Gauss, SimTest::Mdd, SimTest::Dl, SimTest::Esc6});
  cfg.B = 499;
  std::vector<std::vector<double>> secs(cfg.tests.size());
  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    const auto r = run_replication(cfg, 800, 0.0, rep, true);
    for (std::size_t t = 0; t < cfg.tests.size(); ++t)
      secs[t].push_back(r.draws[t].seconds);
  }
  const double chi2 = quantile(secs[0], 0.5);
  Verdict v;
  std::string detail;
  for (std::size_t t = 1; t < cfg.tests.size(); ++t) {
    const double med = quantile(secs[t], 0.5);
    const double ratio = med / chi2;
    v.pass = v.pass && ratio >= 10.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s %.1fx ", sim_test_name(cfg.tests[t]), ratio);
    detail += buf;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "median chi2 %.4fs; ", chi2);
  v.summary = buf + detail + "(need >= 10x)";
  return v;
}

} // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    if (!wanted.empty() && !wanted.count(name))
      continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception &e) {
      v.pass = false;
      v.summary = std::string("error: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s %s [%.1fs]\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.summary.c_str(),
                secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
