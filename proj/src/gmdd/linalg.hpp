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

#ifndef GMDD_LINALG_HPP
#define GMDD_LINALG_HPP

#include <string>
#include <string_view>

#include "gmdd/types.hpp"

namespace gmdd {

inline constexpr double kDefaultIota = 0.001;

/// Absolute: keep eigenvalues above c_n. Relative: keep eigenvalues above
/// c_n times the largest eigenvalue, which makes the rank decision invariant
/// to the units of the data.
enum class ThresholdMode { Absolute, Relative };

ThresholdMode parse_threshold_mode(std::string_view text);
const char *threshold_mode_name(ThresholdMode m);

struct ThresholdedInverse {
  Matrix pseudo_inverse;
  Eigen::Index retained_rank = 0;
  Vector eigenvalues;  // descending
  Matrix eigenvectors; // columns match eigenvalues
  double threshold = 0.0; // effective cut applied to the eigenvalues
};

/// Symmetric eigendecomposition with descending eigenvalues.
void symmetric_eigen(const Matrix &a, Vector &values, Matrix &vectors);

/// Pseudo-inverse keeping only eigenvalues strictly above the cut derived
/// from c_n = n^{-1/2 + iota}. Negative eigenvalues are never retained.
ThresholdedInverse thresholded_pinv(const Matrix &a, std::size_t n, double iota = kDefaultIota,
                                    ThresholdMode mode = ThresholdMode::Absolute);

/// Error text for a fully thresholded covariance.
std::string degenerate_message(const ThresholdedInverse &inv);

/// n * d' A^- d using the retained eigenpairs.
double regularized_wald(const ThresholdedInverse &inv, const Vector &d, std::size_t n);

} // namespace gmdd

#endif
