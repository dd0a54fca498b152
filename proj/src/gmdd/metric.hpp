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

#ifndef GMDD_METRIC_HPP
#define GMDD_METRIC_HPP

#include <string_view>
#include <vector>

#include "gmdd/kernels.hpp"
#include "gmdd/types.hpp"

namespace gmdd {

enum class GmddEstimator { Known, Plugin, UCentered };

GmddEstimator parse_estimator(std::string_view text);

/// -(n(n-1))^{-1} sum_{i != j} u_i u_j K(z_i - z_j). Assumes E U = 0.
double gmdd_known_mean(const Vector &u, const Matrix &z, const KernelSpec &k);

/// Known-mean estimator applied to u - mean(u).
double gmdd_plugin_mean(const Vector &u, const Matrix &z, const KernelSpec &k);

/// Unbiased U-centered estimator; requires n >= 4.
double gmdd_u_centered(const Vector &u, const Matrix &z, const KernelSpec &k);

double gmdd_estimate(GmddEstimator est, const Vector &u, const Matrix &z, const KernelSpec &k);

// Variants on a precomputed kernel matrix. The diagonal is ignored.
double gmdd_known_mean_kmat(const Vector &u, const Matrix &kmat);
double gmdd_plugin_mean_kmat(const Vector &u, const Matrix &kmat);
double gmdd_u_centered_kmat(const Vector &u, const Matrix &kmat);

struct DiscreteAtom {
  double u;
  std::vector<double> z;
  double prob;
};

/// -E[(U - EU)(U' - EU) K(Z - Z')] for a finitely supported law.
double population_gmdd_discrete(const std::vector<DiscreteAtom> &support, const KernelSpec &k);

} // namespace gmdd

#endif
