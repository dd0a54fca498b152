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

#include "gmdd/gmdd.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "gmdd/dgp.hpp"
#include "gmdd/error.hpp"
#include "gmdd/kernels.hpp"
#include "gmdd/parallel.hpp"
#include "gmdd/run_config.hpp"

struct gmdd_dataset {
  gmdd::Dataset data;
};

struct gmdd_result {
  gmdd::RunOutput output;
};

namespace {

thread_local std::string g_last_error;

gmdd_status fail(gmdd_status s, const char *what) {
  g_last_error = what ? what : "unknown error";
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body> gmdd_status guarded(Body &&body) {
  try {
    body();
    g_last_error.clear();
    return GMDD_OK;
  } catch (const gmdd::ValidationError &e) {
    return fail(GMDD_ERR_INVALID, e.what());
  } catch (const gmdd::ComputationError &e) {
    return fail(GMDD_ERR_COMPUTE, e.what());
  } catch (const gmdd::IoError &e) {
    return fail(GMDD_ERR_IO, e.what());
  } catch (const std::bad_alloc &) {
    return fail(GMDD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(GMDD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GMDD_ERR_INTERNAL, "unknown error");
  }
}

void require(const void *p, const char *what) {
  if (p == nullptr)
    throw gmdd::ValidationError(std::string(what) + " must not be NULL");
}

std::string text(const char *s, const char *def = "") { return s ? s : def; }

std::vector<std::string> names(const char *s) {
  if (!s)
    return {};
  return gmdd::split_names(s);
}

gmdd::OutputFormat to_format(gmdd_format f) {
  if (f == GMDD_FORMAT_JSON)
    return gmdd::OutputFormat::Json;
  if (f == GMDD_FORMAT_CSV)
    return gmdd::OutputFormat::Csv;
  throw gmdd::ValidationError("unknown output format");
}

gmdd::RegressionRequest regression(const char *y, const char *x, const char *iv, int intercept,
                                   int standardize) {
  gmdd::RegressionRequest r;
  r.y_col = text(y);
  r.x_cols = names(x);
  r.iv_cols = names(iv);
  r.intercept = intercept != 0;
  r.standardize_z = standardize != 0;
  return r;
}

gmdd::SimConfig sim_config(const gmdd_sim_options *o, bool bench) {
  gmdd::SimConfig s;
  s.dgp = gmdd::parse_dgp(text(o->dgp, "LS1"));
  if (o->n_grid) {
    s.n_grid.clear();
    for (double v : gmdd::parse_grid(o->n_grid)) {
      if (!(v >= 0.0) || v != std::floor(v))
        throw gmdd::ValidationError("sample sizes must be nonnegative integers");
      s.n_grid.push_back(static_cast<std::size_t>(v));
    }
  } else if (bench) {
    s.n_grid = {200, 400, 600, 800};
  }
  if (o->gamma_grid)
    s.gamma_grid = gmdd::parse_grid(o->gamma_grid);
  if (bench && s.gamma_grid.size() != 1)
    throw gmdd::ValidationError("bench takes a single gamma");
  s.reps = o->reps;
  if (o->levels)
    s.levels = gmdd::parse_grid(o->levels);
  const auto tests = o->tests ? gmdd::split_names(o->tests)
                              : (bench ? std::vector<std::string>{"chi2", "gauss", "mdd", "dl",
                                                                  "esc6"}
                                       : std::vector<std::string>{"chi2"});
  s.tests.clear();
  for (const auto &t : tests)
    s.tests.push_back(gmdd::parse_sim_test(t));
  s.B = o->B;
  s.seed = o->seed;
  s.iota = o->iota;
  if (o->threshold)
    s.threshold = gmdd::parse_threshold_mode(o->threshold);
  s.kernel = text(o->kernel, "gauss");
  s.delta_b = o->delta_b;
  s.augment = o->augment != 0;
  s.multiplier = gmdd::parse_multiplier(text(o->multiplier, "mammen"));
  gmdd::validate(s);
  return s;
}

gmdd_result *wrap(gmdd::RunOutput out) { return new gmdd_result{std::move(out)}; }

} // namespace

extern "C" {

const char *gmdd_version(void) { return "0.1.0"; }

const char *gmdd_last_error(void) { return g_last_error.c_str(); }

gmdd_status gmdd_set_threads(int threads) {
  return guarded([&] {
    if (threads < 0)
      throw gmdd::ValidationError("thread count must be nonnegative");
    gmdd::set_threads(threads);
  });
}

gmdd_status gmdd_dataset_load_csv(const char *path, const char *const *columns, size_t ncols,
                                  gmdd_dataset **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output handle");
    *out = nullptr;
    std::vector<std::string> cols;
    if (ncols > 0)
      require(columns, "column list");
    for (size_t i = 0; i < ncols; ++i) {
      require(columns[i], "column name");
      cols.emplace_back(columns[i]);
    }
    *out = new gmdd_dataset{gmdd::load_csv(path, cols)};
  });
}

gmdd_status gmdd_dataset_from_matrix(const double *values, size_t rows, size_t cols,
                                     const char *const *names_in, gmdd_dataset **out) {
  return guarded([&] {
    require(out, "output handle");
    *out = nullptr;
    if (rows == 0 || cols == 0)
      throw gmdd::ValidationError("dataset must have at least one row and one column");
    require(values, "values");
    require(names_in, "column names");
    std::vector<std::string> nm;
    for (size_t j = 0; j < cols; ++j) {
      require(names_in[j], "column name");
      nm.emplace_back(names_in[j]);
    }
    gmdd::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
    if (!m.allFinite())
      throw gmdd::ValidationError("dataset contains non-finite values");
    *out = new gmdd_dataset{gmdd::Dataset(std::move(nm), std::move(m), "matrix")};
  });
}

gmdd_status gmdd_dataset_generate(const char *dgp, size_t n, double gamma, uint64_t seed,
                                  gmdd_dataset **out) {
  return guarded([&] {
    require(dgp, "dgp");
    require(out, "output handle");
    *out = nullptr;
    *out = new gmdd_dataset{gmdd::generate({gmdd::parse_dgp(dgp), n, gamma, seed})};
  });
}

size_t gmdd_dataset_rows(const gmdd_dataset *ds) {
  return ds ? static_cast<size_t>(ds->data.rows()) : 0;
}

size_t gmdd_dataset_cols(const gmdd_dataset *ds) {
  return ds ? static_cast<size_t>(ds->data.cols()) : 0;
}

size_t gmdd_dataset_dropped(const gmdd_dataset *ds) { return ds ? ds->data.dropped_rows : 0; }

const char *gmdd_dataset_column_name(const gmdd_dataset *ds, size_t index) {
  if (!ds || index >= ds->data.names().size())
    return nullptr;
  return ds->data.names()[index].c_str();
}

gmdd_status gmdd_dataset_column(const gmdd_dataset *ds, const char *name, double *out,
                                size_t len) {
  return guarded([&] {
    require(ds, "dataset");
    require(name, "column name");
    require(out, "output buffer");
    if (len != static_cast<size_t>(ds->data.rows()))
      throw gmdd::ValidationError("output buffer length must equal the row count");
    const gmdd::Vector v = ds->data.column(name);
    for (size_t i = 0; i < len; ++i)
      out[i] = v[static_cast<Eigen::Index>(i)];
  });
}

void gmdd_dataset_free(gmdd_dataset *ds) { delete ds; }

gmdd_status gmdd_kernel_eval(const char *kernel, const double *z, size_t dim, double *out) {
  return guarded([&] {
    require(kernel, "kernel");
    require(out, "output");
    if (dim > 0)
      require(z, "z");
    const gmdd::KernelSpec k = gmdd::KernelSpec::parse(kernel, dim);
    *out = k(std::span<const double>(z, dim));
  });
}

void gmdd_metric_options_init(gmdd_metric_options *o) {
  if (o)
    *o = gmdd_metric_options{nullptr, nullptr, "gauss", "ucentered"};
}

void gmdd_mi_options_init(gmdd_mi_options *o) {
  if (o)
    *o = gmdd_mi_options{nullptr, nullptr, nullptr, nullptr, "gauss", gmdd::kDefaultIota,
                           "absolute", 1};
}

void gmdd_spec_options_init(gmdd_spec_options *o) {
  if (o)
    *o = gmdd_spec_options{nullptr, nullptr, nullptr, 0, 0, "gauss", "scalar", nullptr, 0,
                           nullptr, nullptr, gmdd::kDefaultIota, "relative", 1, 0};
}

void gmdd_boot_options_init(gmdd_boot_options *o) {
  if (o)
    *o = gmdd_boot_options{nullptr, nullptr, nullptr, 0, 0, "gauss", 499, 0, "mammen"};
}

void gmdd_sim_options_init(gmdd_sim_options *o) {
  if (o)
    *o = gmdd_sim_options{"LS1", nullptr, "0", 1000, nullptr, nullptr, 499, 42,
                          gmdd::kDefaultIota, nullptr, "gauss", 0.5, 1, "mammen"};
}

gmdd_status gmdd_metric(const gmdd_dataset *ds, const gmdd_metric_options *o, gmdd_format fmt,
                        gmdd_result **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(o, "options");
    require(out, "output handle");
    *out = nullptr;
    gmdd::MetricRequest r;
    r.u_col = text(o->u_col);
    r.z_cols = names(o->z_cols);
    r.kernel = text(o->kernel, "gauss");
    r.estimator = text(o->estimator, "ucentered");
    *out = wrap(gmdd::run_metric(ds->data, r, to_format(fmt)));
  });
}

gmdd_status gmdd_mi_test(const gmdd_dataset *ds, const gmdd_mi_options *o, gmdd_format fmt,
                         gmdd_result **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(o, "options");
    require(out, "output handle");
    *out = nullptr;
    gmdd::MiRequest r;
    r.u_col = text(o->u_col);
    r.z_cols = names(o->z_cols);
    if (o->h_col)
      r.h_col = o->h_col;
    r.aug_cols = names(o->aug_cols);
    r.kernel = text(o->kernel, "gauss");
    r.iota = o->iota;
    r.threshold = gmdd::parse_threshold_mode(text(o->threshold, "absolute"));
    r.center = o->center != 0;
    *out = wrap(gmdd::run_mi(ds->data, r, to_format(fmt)));
  });
}

gmdd_status gmdd_spec_test(const gmdd_dataset *ds, const gmdd_spec_options *o, gmdd_format fmt,
                           gmdd_result **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(o, "options");
    require(out, "output handle");
    *out = nullptr;
    gmdd::SpecRequest r;
    r.reg = regression(o->y_col, o->x_cols, o->iv_cols, o->intercept, o->standardize_z);
    r.kernel = text(o->kernel, "gauss");
    r.mode = text(o->mode, "scalar");
    if (o->delta_b_len > 0) {
      require(o->delta_b, "delta_b");
      r.delta_b.assign(o->delta_b, o->delta_b + o->delta_b_len);
    }
    r.aug_cols = names(o->aug_cols);
    if (o->h_col)
      r.h_col = o->h_col;
    r.iota = o->iota;
    r.threshold = gmdd::parse_threshold_mode(text(o->threshold, "relative"));
    r.center = o->center != 0;
    r.ignore_estimation_effect = o->ignore_estimation_effect != 0;
    *out = wrap(gmdd::run_spec(ds->data, r, to_format(fmt)));
  });
}

gmdd_status gmdd_spec_boot(const gmdd_dataset *ds, const gmdd_boot_options *o, gmdd_format fmt,
                           gmdd_result **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(o, "options");
    require(out, "output handle");
    *out = nullptr;
    gmdd::BootRequest r;
    r.reg = regression(o->y_col, o->x_cols, o->iv_cols, o->intercept, o->standardize_z);
    r.family = text(o->family, "gauss");
    if (o->B < 1)
      throw gmdd::ValidationError("B must be at least 1");
    r.B = o->B;
    r.seed = o->seed;
    r.multiplier = text(o->multiplier, "mammen");
    *out = wrap(gmdd::run_spec_boot(ds->data, r, to_format(fmt)));
  });
}

gmdd_status gmdd_simulate(const gmdd_sim_options *o, gmdd_format fmt, gmdd_result **out) {
  return guarded([&] {
    require(o, "options");
    require(out, "output handle");
    *out = nullptr;
    *out = wrap(gmdd::run_simulate(sim_config(o, false), to_format(fmt)));
  });
}

gmdd_status gmdd_bench(const gmdd_sim_options *o, gmdd_format fmt, gmdd_result **out) {
  return guarded([&] {
    require(o, "options");
    require(out, "output handle");
    *out = nullptr;
    *out = wrap(gmdd::run_bench(sim_config(o, true), to_format(fmt)));
  });
}

gmdd_status gmdd_run(const char *config_json, gmdd_result **out) {
  return guarded([&] {
    require(config_json, "configuration");
    require(out, "output handle");
    *out = nullptr;
    *out = wrap(gmdd::run_config(config_json));
  });
}

double gmdd_result_statistic(const gmdd_result *r) {
  return r ? r->output.statistic : std::numeric_limits<double>::quiet_NaN();
}

double gmdd_result_p_value(const gmdd_result *r) {
  return r ? r->output.p_value : std::numeric_limits<double>::quiet_NaN();
}

int gmdd_result_df(const gmdd_result *r) { return r ? r->output.df : 0; }

const char *gmdd_result_payload(const gmdd_result *r) {
  return r ? r->output.payload.c_str() : nullptr;
}

size_t gmdd_result_diagnostic_count(const gmdd_result *r) {
  return r ? r->output.diagnostics.size() : 0;
}

const char *gmdd_result_diagnostic(const gmdd_result *r, size_t index) {
  if (!r || index >= r->output.diagnostics.size())
    return nullptr;
  return r->output.diagnostics[index].c_str();
}

void gmdd_result_free(gmdd_result *r) { delete r; }

} // extern "C"
