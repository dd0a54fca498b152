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

#include "gmdd/mi_test.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "gmdd/distributions.hpp"
#include "gmdd/error.hpp"
#include "gmdd/parallel.hpp"

namespace gmdd {

namespace {

constexpr double kCollinearCorrelation = 1.0 - 1e-8;

double sample_variance(const Vector &x) {
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

double abs_correlation(const Vector &a, const Vector &b) {
  const Vector ac = (a.array() - a.mean()).matrix();
  const Vector bc = (b.array() - b.mean()).matrix();
  const double den = ac.norm() * bc.norm();
  return den > 0.0 ? std::fabs(ac.dot(bc)) / den : 0.0;
}

void check_column(const Vector &c, Eigen::Index n, const char *what) {
  if (c.size() != n)
    throw ValidationError(std::string(what) + " has wrong length");
  if (!c.allFinite())
    throw ValidationError(std::string(what) + " contains non-finite values");
}

void check_inputs(const Vector &u, const Matrix &v, const Matrix &kmat) {
  const Eigen::Index n = u.size();
  if (n < 2)
    throw ValidationError("need at least 2 observations");
  if (v.rows() != n || kmat.rows() != n || kmat.cols() != n)
    throw ValidationError("dimension mismatch between u, V and the kernel matrix");
  if (!u.allFinite() || !v.allFinite())
    throw ValidationError("u or V contains non-finite values");
}

} // namespace

int VSpec::declared_df() const {
  if (scalar_f)
    return 1;
  return static_cast<int>(h.size() + q.size());
}

Vector default_h(const Matrix &z) { return (0.5 * z.rowwise().sum()).array().exp().matrix(); }

Matrix build_v(const Vector &u, const VSpec &vs) {
  const Eigen::Index n = u.size();
  if (n < 2)
    throw ValidationError("need at least 2 observations");
  if (!u.allFinite())
    throw ValidationError("u contains non-finite values");

  Matrix v;
  if (vs.scalar_f) {
    if (!vs.h.empty() || !vs.q.empty())
      throw ValidationError("scalar mode cannot be combined with h or augmentations");
    check_column(*vs.scalar_f, n, "scalar f");
    v = (u - *vs.scalar_f);
  } else {
    if (vs.h.empty())
      throw ValidationError("V needs at least one h function or scalar mode");
    v.resize(n, static_cast<Eigen::Index>(2 * vs.h.size() + vs.q.size()));
    Eigen::Index col = 0;
    for (const auto &h : vs.h) {
      check_column(h, n, "h");
      if (!(sample_variance(h) > 0.0))
        throw ValidationError("h is degenerate (zero sample variance)");
      v.col(col++) = h;
      v.col(col++) = u - h;
    }
    for (const auto &q : vs.q) {
      check_column(q, n, "augmentation");
      if (!(sample_variance(q) > 0.0))
        throw ValidationError("augmentation is degenerate (zero sample variance)");
      for (Eigen::Index c = 0; c < col; ++c) {
        if (abs_correlation(q, v.col(c)) > kCollinearCorrelation)
          throw ValidationError("augmentation is collinear with an existing column of V");
      }
      v.col(col++) = q;
    }
  }
  if (vs.center_v)
    v.rowwise() -= v.colwise().mean();
  return v;
}

Matrix offdiag_product(const Matrix &kmat, const Matrix &x) {
  Matrix out = kmat.transpose() * x;
  out -= kmat.diagonal().asDiagonal() * x;
  return out;
}

Vector delta_hat(const Vector &u, const Matrix &v, const Matrix &kmat) {
  check_inputs(u, v, kmat);
  const auto n = static_cast<double>(u.size());
  const Vector ku = offdiag_product(kmat, u);
  Vector d(v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < u.size(); ++j)
      s += v(j, c) * ku[j];
    d[c] = s / (n * (n - 1.0));
  }
  return d;
}

Matrix psi1_hat(const Vector &u, const Matrix &v, const Matrix &kmat) {
  check_inputs(u, v, kmat);
  const auto n = static_cast<double>(u.size());
  const Vector ku = offdiag_product(kmat, u);
  const Matrix kv = offdiag_product(kmat, v);
  Matrix psi(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      psi(i, c) = (v(i, c) * ku[i] + u[i] * kv(i, c)) / (2.0 * (n - 1.0));
  }
  return psi;
}

Matrix omega_from_psi(const Matrix &psi, const Vector &delta, double divisor) {
  const Matrix dev = psi.rowwise() - delta.transpose();
  Matrix omega = (4.0 / divisor) * (dev.transpose() * dev);
  return 0.5 * (omega + omega.transpose());
}

Matrix omega_tilde(const Vector &u, const Matrix &v, const Matrix &kmat) {
  if (u.size() < 3)
    throw ValidationError("need at least 3 observations");
  const Matrix psi = psi1_hat(u, v, kmat);
  return omega_from_psi(psi, delta_hat(u, v, kmat), static_cast<double>(u.size() - 1));
}

MiTestResult mi_test_prepared(const Vector &u, const Matrix &v, const Matrix &kmat, int df,
                              double iota, ThresholdMode mode) {
  if (u.size() < 3)
    throw ValidationError("need at least 3 observations");
  if (df < 1 || df > v.cols())
    throw ValidationError("declared degrees of freedom must lie in [1, p_v]");
  MiTestResult r;
  r.df = df;
  const auto n = static_cast<std::size_t>(u.size());
  r.delta_hat = delta_hat(u, v, kmat);
  const Matrix psi = psi1_hat(u, v, kmat);
  const Matrix omega = omega_from_psi(psi, r.delta_hat, static_cast<double>(n - 1));
  const ThresholdedInverse inv = thresholded_pinv(omega, n, iota, mode);
  r.spectrum = inv.eigenvalues;
  r.retained_rank = inv.retained_rank;
  if (inv.retained_rank == 0)
    throw ComputationError(degenerate_message(inv));
  r.statistic = regularized_wald(inv, r.delta_hat, n);
  r.p_value = chi2_sf(r.statistic, df);
  return r;
}

MiTestResult mi_test(const Vector &u, const Matrix &z, const VSpec &vs, const KernelSpec &k,
                     double iota, ThresholdMode mode) {
  const auto start = std::chrono::steady_clock::now();
  if (z.rows() != u.size())
    throw ValidationError("u and Z have different numbers of rows");
  const Matrix v = build_v(u, vs);
  const Matrix kmat = kernel_matrix(k, z);
  MiTestResult r = mi_test_prepared(u, v, kmat, vs.declared_df(), iota, mode);
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace gmdd
