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

#include "gmdd/metric.hpp"

#include <cmath>
#include <string>

#include "gmdd/error.hpp"
#include "gmdd/parallel.hpp"

namespace gmdd {

namespace {

// Off-diagonal row sums of K and of K u, one entry per observation.
struct RowSums {
  Vector k;
  Vector ku;
};

void check_sample(const Vector &u, Eigen::Index rows, std::size_t min_n) {
  if (u.size() != rows)
    throw ValidationError("u has " + std::to_string(u.size()) + " entries but z has " +
                          std::to_string(rows) + " rows");
  if (static_cast<std::size_t>(u.size()) < min_n)
    throw ValidationError("need at least " + std::to_string(min_n) + " observations");
  if (!u.allFinite())
    throw ValidationError("u contains non-finite values");
}

void check_kmat(const Vector &u, const Matrix &kmat, std::size_t min_n) {
  if (kmat.rows() != kmat.cols())
    throw ValidationError("kernel matrix must be square");
  check_sample(u, kmat.rows(), min_n);
}

RowSums row_sums_kmat(const Vector &u, const Matrix &kmat) {
  const Eigen::Index n = u.size();
  RowSums s{Vector(n), Vector(n)};
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    double sk = 0.0, sku = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i)
        continue;
      const double kij = kmat(j, i);
      sk += kij;
      sku += kij * u[j];
    }
    s.k[i] = sk;
    s.ku[i] = sku;
  });
  return s;
}

RowSums row_sums_data(const Vector &u, const Matrix &z, const KernelSpec &k) {
  if (static_cast<std::size_t>(z.cols()) != k.dim())
    throw ValidationError("kernel expects " + std::to_string(k.dim()) + " columns, got " +
                          std::to_string(z.cols()));
  if (!z.allFinite())
    throw ValidationError("z contains non-finite values");
  const Eigen::Index n = u.size();
  const std::size_t p = k.dim();
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = z;
  const double *base = rows.data();
  RowSums s{Vector(n), Vector(n)};
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double sk = 0.0, sku = 0.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      if (j == i)
        continue;
      const double kij = k.between({base + i * p, p}, {base + j * p, p});
      sk += kij;
      sku += kij * u[static_cast<Eigen::Index>(j)];
    }
    s.k[static_cast<Eigen::Index>(i)] = sk;
    s.ku[static_cast<Eigen::Index>(i)] = sku;
  });
  return s;
}

double ordered_sum(const Vector &a, const Vector &b) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    total += a[i] * b[i];
  return total;
}

double known_from_sums(const Vector &u, const RowSums &s) {
  const auto n = static_cast<double>(u.size());
  return -ordered_sum(u, s.ku) / (n * (n - 1.0));
}

// Uses sum_{i != j} A~_ij B~_ij = sum_{i != j} A~_ij b_ij, which holds because
// every off-diagonal row of a U-centered matrix sums to zero.
double u_centered_from_sums(const Vector &u, const RowSums &s) {
  const auto n = static_cast<double>(u.size());
  double total_u = 0.0, total_u2 = 0.0, total_k = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    total_u += u[i];
    total_u2 += u[i] * u[i];
    total_k += s.k[i];
  }
  double cross = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    cross += s.k[i] * u[i] * (total_u - u[i]);
  const double quad = ordered_sum(u, s.ku);
  const double inner = quad - 2.0 * cross / (n - 2.0) +
                       total_k * (total_u * total_u - total_u2) / ((n - 1.0) * (n - 2.0));
  return -inner / (n * (n - 3.0));
}

Vector centered(const Vector &u) { return (u.array() - u.mean()).matrix(); }

} // namespace

GmddEstimator parse_estimator(std::string_view text) {
  if (text == "known")
    return GmddEstimator::Known;
  if (text == "plugin")
    return GmddEstimator::Plugin;
  if (text == "ucentered")
    return GmddEstimator::UCentered;
  throw ValidationError("unknown estimator '" + std::string(text) +
                        "' (expected known, plugin or ucentered)");
}

double gmdd_known_mean(const Vector &u, const Matrix &z, const KernelSpec &k) {
  check_sample(u, z.rows(), 2);
  return known_from_sums(u, row_sums_data(u, z, k));
}

double gmdd_plugin_mean(const Vector &u, const Matrix &z, const KernelSpec &k) {
  check_sample(u, z.rows(), 2);
  return gmdd_known_mean(centered(u), z, k);
}

double gmdd_u_centered(const Vector &u, const Matrix &z, const KernelSpec &k) {
  check_sample(u, z.rows(), 4);
  return u_centered_from_sums(u, row_sums_data(u, z, k));
}

double gmdd_estimate(GmddEstimator est, const Vector &u, const Matrix &z, const KernelSpec &k) {
  switch (est) {
  case GmddEstimator::Known:
    return gmdd_known_mean(u, z, k);
  case GmddEstimator::Plugin:
    return gmdd_plugin_mean(u, z, k);
  case GmddEstimator::UCentered:
    return gmdd_u_centered(u, z, k);
  }
  throw ValidationError("unknown estimator");
}

double gmdd_known_mean_kmat(const Vector &u, const Matrix &kmat) {
  check_kmat(u, kmat, 2);
  return known_from_sums(u, row_sums_kmat(u, kmat));
}

double gmdd_plugin_mean_kmat(const Vector &u, const Matrix &kmat) {
  check_kmat(u, kmat, 2);
  return gmdd_known_mean_kmat(centered(u), kmat);
}

double gmdd_u_centered_kmat(const Vector &u, const Matrix &kmat) {
  check_kmat(u, kmat, 4);
  return u_centered_from_sums(u, row_sums_kmat(u, kmat));
}

double population_gmdd_discrete(const std::vector<DiscreteAtom> &support, const KernelSpec &k) {
  if (support.empty())
    throw ValidationError("support is empty");
  double total = 0.0;
  double mean = 0.0;
  for (const auto &a : support) {
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob))
      throw ValidationError("probabilities must be finite and nonnegative");
    if (!std::isfinite(a.u))
      throw ValidationError("support value of u is not finite");
    if (a.z.size() != k.dim())
      throw ValidationError("support point has wrong dimension");
    total += a.prob;
    mean += a.prob * a.u;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw ValidationError("probabilities must sum to 1");

  double value = 0.0;
  for (const auto &s : support) {
    for (const auto &t : support) {
      value += s.prob * t.prob * (s.u - mean) * (t.u - mean) * k.between(s.z, t.z);
    }
  }
  return -value;
}

} // namespace gmdd
