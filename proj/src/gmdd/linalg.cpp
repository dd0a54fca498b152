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

#include "gmdd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <Eigen/Eigenvalues>

#include "gmdd/error.hpp"

namespace gmdd {

void symmetric_eigen(const Matrix &a, Vector &values, Matrix &vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw ComputationError("eigendecomposition failed");
  values = solver.eigenvalues().reverse();
  vectors = solver.eigenvectors().rowwise().reverse();
}

ThresholdMode parse_threshold_mode(std::string_view text) {
  if (text == "relative")
    return ThresholdMode::Relative;
  if (text == "absolute")
    return ThresholdMode::Absolute;
  throw ValidationError("unknown threshold mode '" + std::string(text) +
                        "' (expected relative or absolute)");
}

const char *threshold_mode_name(ThresholdMode m) {
  return m == ThresholdMode::Relative ? "relative" : "absolute";
}

ThresholdedInverse thresholded_pinv(const Matrix &a, std::size_t n, double iota,
                                    ThresholdMode mode) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ValidationError("matrix must be square and nonempty");
  if (!a.allFinite())
    throw ValidationError("matrix contains non-finite values");
  if (n < 2)
    throw ValidationError("sample size must be at least 2");
  if (!(iota > 0.0 && iota < 0.5))
    throw ValidationError("iota must lie in (0, 0.5)");

  ThresholdedInverse out;
  out.threshold = std::pow(static_cast<double>(n), -0.5 + iota);
  const Matrix sym = 0.5 * (a + a.transpose());
  symmetric_eigen(sym, out.eigenvalues, out.eigenvectors);
  if (mode == ThresholdMode::Relative)
    out.threshold *= std::max(out.eigenvalues[0], 0.0);

  const Eigen::Index p = sym.rows();
  out.pseudo_inverse = Matrix::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double lambda = out.eigenvalues[k];
    if (!(lambda > out.threshold) || !(lambda > 0.0))
      continue;
    ++out.retained_rank;
    const auto g = out.eigenvectors.col(k);
    out.pseudo_inverse.noalias() += (1.0 / lambda) * g * g.transpose();
  }
  return out;
}

std::string degenerate_message(const ThresholdedInverse &inv) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "degenerate covariance (largest eigenvalue %.6g does not exceed threshold %.6g)",
                inv.eigenvalues.size() > 0 ? inv.eigenvalues[0] : 0.0, inv.threshold);
  return buf;
}

double regularized_wald(const ThresholdedInverse &inv, const Vector &d, std::size_t n) {
  if (d.size() != inv.eigenvalues.size())
    throw ValidationError("dimension mismatch in Wald statistic");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double lambda = inv.eigenvalues[k];
    if (!(lambda > inv.threshold) || !(lambda > 0.0))
      continue;
    const double proj = inv.eigenvectors.col(k).dot(d);
    sum += proj * proj / lambda;
  }
  return static_cast<double>(n) * sum;
}

} // namespace gmdd
