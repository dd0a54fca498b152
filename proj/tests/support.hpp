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

#ifndef GMDD_TESTS_SUPPORT_HPP
#define GMDD_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "gmdd/random.hpp"
#include "gmdd/types.hpp"

namespace gmdd::testing {

inline Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rng.normal();
  return m;
}

inline Vector normal_vector(Eigen::Index n, std::uint64_t seed) {
  return normal_matrix(n, 1, seed).col(0);
}

/// Relative closeness with an absolute floor.
inline bool near_rel(double a, double b, double rel, double abs_floor = 0.0) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(rel * scale, abs_floor);
}

} // namespace gmdd::testing

#endif
