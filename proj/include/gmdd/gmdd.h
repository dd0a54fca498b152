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

#ifndef GMDD_GMDD_H
#define GMDD_GMDD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GMDD_API __declspec(dllexport)
#else
#define GMDD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gmdd_status {
  GMDD_OK = 0,
  GMDD_ERR_INVALID = 1,  /* bad arguments or malformed input data */
  GMDD_ERR_COMPUTE = 2,  /* degenerate covariance, rank deficiency, ... */
  GMDD_ERR_IO = 3,
  GMDD_ERR_INTERNAL = 4
} gmdd_status;

typedef enum gmdd_format { GMDD_FORMAT_JSON = 0, GMDD_FORMAT_CSV = 1 } gmdd_format;

typedef struct gmdd_dataset gmdd_dataset;
typedef struct gmdd_result gmdd_result;

GMDD_API const char *gmdd_version(void);

/* Message of the last failed call on this thread; empty after success. */
GMDD_API const char *gmdd_last_error(void);

/* Worker threads for subsequent calls; 0 restores the default
   (GMDD_THREADS or the OpenMP default). */
GMDD_API gmdd_status gmdd_set_threads(int threads);

/* ---- datasets ---- */

/* Loads a headered CSV keeping `columns` (all when ncols == 0). Rows with an
   empty or non-numeric kept cell are dropped and counted. */
GMDD_API gmdd_status gmdd_dataset_load_csv(const char *path, const char *const *columns,
                                           size_t ncols, gmdd_dataset **out);

/* `values` is row-major rows x cols. */
GMDD_API gmdd_status gmdd_dataset_from_matrix(const double *values, size_t rows, size_t cols,
                                              const char *const *names, gmdd_dataset **out);

/* Draws one sample from a simulation design: LS1..LS5 or MI1..MI4. */
GMDD_API gmdd_status gmdd_dataset_generate(const char *dgp, size_t n, double gamma,
                                           uint64_t seed, gmdd_dataset **out);

GMDD_API size_t gmdd_dataset_rows(const gmdd_dataset *ds);
GMDD_API size_t gmdd_dataset_cols(const gmdd_dataset *ds);
GMDD_API size_t gmdd_dataset_dropped(const gmdd_dataset *ds);
GMDD_API const char *gmdd_dataset_column_name(const gmdd_dataset *ds, size_t index);
GMDD_API gmdd_status gmdd_dataset_column(const gmdd_dataset *ds, const char *name, double *out,
                                         size_t len);
GMDD_API void gmdd_dataset_free(gmdd_dataset *ds);

/* ---- kernels ---- */

/* K(z) for a kernel spec such as "gauss", "srb:0.5" or "laplace:2". */
GMDD_API gmdd_status gmdd_kernel_eval(const char *kernel, const double *z, size_t dim,
                                      double *out);

/* ---- tests ----
   Column lists are comma-separated names. NULL strings take defaults. */

typedef struct gmdd_metric_options {
  const char *u_col;
  const char *z_cols;
  const char *kernel;    /* default "gauss" */
  const char *estimator; /* known | plugin | ucentered (default) */
} gmdd_metric_options;

typedef struct gmdd_mi_options {
  const char *u_col;
  const char *z_cols;
  const char *h_col;    /* NULL: h(Z) = exp(0.5 * sum of Z columns) */
  const char *aug_cols; /* optional augmentations */
  const char *kernel;
  double iota;          /* default 0.001 */
  const char *threshold; /* absolute (default) | relative */
  int center;           /* default 1 */
} gmdd_mi_options;

typedef struct gmdd_spec_options {
  const char *y_col;
  const char *x_cols;
  const char *iv_cols; /* NULL: OLS with Z = X */
  int intercept;
  int standardize_z;
  const char *kernel;
  const char *mode;       /* scalar (default) | pair */
  const double *delta_b;  /* NULL: 0.5 for every parameter */
  size_t delta_b_len;
  const char *aug_cols;
  const char *h_col;
  double iota;
  const char *threshold; /* relative (default) | absolute */
  int center;
  int ignore_estimation_effect;
} gmdd_spec_options;

typedef struct gmdd_boot_options {
  const char *y_col;
  const char *x_cols;
  const char *iv_cols;
  int intercept;
  int standardize_z;
  const char *family;     /* gauss | mdd | dl | esc6 */
  int B;                  /* default 499 */
  uint64_t seed;
  const char *multiplier; /* mammen (default) | rademacher */
} gmdd_boot_options;

typedef struct gmdd_sim_options {
  const char *dgp;        /* default "LS1" */
  const char *n_grid;     /* "200,400" */
  const char *gamma_grid; /* "0" or "0:1:0.1" */
  size_t reps;
  const char *tests;      /* "chi2,gauss,mdd,dl,esc6" */
  const char *levels;     /* default "0.1,0.05,0.01" */
  int B;
  uint64_t seed;
  double iota;
  const char *threshold;  /* NULL: absolute for MI designs, relative for LS designs */
  const char *kernel;
  double delta_b;
  int augment;
  const char *multiplier;
} gmdd_sim_options;

GMDD_API void gmdd_metric_options_init(gmdd_metric_options *o);
GMDD_API void gmdd_mi_options_init(gmdd_mi_options *o);
GMDD_API void gmdd_spec_options_init(gmdd_spec_options *o);
GMDD_API void gmdd_boot_options_init(gmdd_boot_options *o);
GMDD_API void gmdd_sim_options_init(gmdd_sim_options *o);

GMDD_API gmdd_status gmdd_metric(const gmdd_dataset *ds, const gmdd_metric_options *o,
                                 gmdd_format fmt, gmdd_result **out);
GMDD_API gmdd_status gmdd_mi_test(const gmdd_dataset *ds, const gmdd_mi_options *o,
                                  gmdd_format fmt, gmdd_result **out);
GMDD_API gmdd_status gmdd_spec_test(const gmdd_dataset *ds, const gmdd_spec_options *o,
                                    gmdd_format fmt, gmdd_result **out);
GMDD_API gmdd_status gmdd_spec_boot(const gmdd_dataset *ds, const gmdd_boot_options *o,
                                    gmdd_format fmt, gmdd_result **out);
GMDD_API gmdd_status gmdd_simulate(const gmdd_sim_options *o, gmdd_format fmt,
                                   gmdd_result **out);
GMDD_API gmdd_status gmdd_bench(const gmdd_sim_options *o, gmdd_format fmt, gmdd_result **out);

/* Runs a JSON configuration {"command": "gmdd"|"mi"|"spec"|"spec-boot"|
   "simulate"|"bench", ...}. Unknown keys are rejected. */
GMDD_API gmdd_status gmdd_run(const char *config_json, gmdd_result **out);

/* ---- results ---- */

GMDD_API double gmdd_result_statistic(const gmdd_result *r); /* NaN if none */
GMDD_API double gmdd_result_p_value(const gmdd_result *r);   /* NaN if none */
GMDD_API int gmdd_result_df(const gmdd_result *r);           /* 0 if none */
GMDD_API const char *gmdd_result_payload(const gmdd_result *r);
GMDD_API size_t gmdd_result_diagnostic_count(const gmdd_result *r);
GMDD_API const char *gmdd_result_diagnostic(const gmdd_result *r, size_t index);
GMDD_API void gmdd_result_free(gmdd_result *r);

#ifdef __cplusplus
}
#endif

#endif
