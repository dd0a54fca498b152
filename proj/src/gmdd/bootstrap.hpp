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

#ifndef GMDD_BOOTSTRAP_HPP
#define GMDD_BOOTSTRAP_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "gmdd/estimators.hpp"
#include "gmdd/types.hpp"

namespace gmdd {

enum class IcmFamily { Gauss, Mdd, Dl, Esc6 };
enum class Multiplier { Mammen, Rademacher };

IcmFamily parse_icm_family(std::string_view text);
const char *icm_family_name(IcmFamily f);
Multiplier parse_multiplier(std::string_view text);

struct BootstrapConfig {
  int B = 499;
  Multiplier multiplier = Multiplier::Mammen;
  std::uint64_t seed = 0;
};

/// Precomputes the Z-dependent part of an ICM statistic so that evaluating it
/// on a new residual vector costs O(n^2).
class IcmStatistic {
public:
  IcmStatistic(IcmFamily family, const Matrix &z);

  double operator()(const Vector &u) const;

  IcmFamily family() const { return family_; }
  Eigen::Index n() const { return n_; }

private:
  IcmFamily family_;
  Eigen::Index n_;
  Matrix m_; // kernel matrix, indicator matrix or angular weights
};

double icm_statistic(const Vector &u, const Matrix &z, IcmFamily family);

/// ESC6 weights A_ij = n^{-1} sum_r c_ijr from the general angle formula.
Matrix esc6_weights(const Matrix &z);

struct BootstrapOutcome {
  IcmFamily family;
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Draws the multiplier vector of replicate `b`.
Vector bootstrap_multipliers(const BootstrapConfig &cfg, std::size_t b, Eigen::Index n);

/// Wild bootstrap with full refit: Y* = g_hat + u_hat v*.
std::vector<BootstrapOutcome> wild_bootstrap(const PreparedModel &model, const Vector &y,
                                             const Matrix &z,
                                             const std::vector<IcmFamily> &families,
                                             const BootstrapConfig &cfg);

/// Multiplier bootstrap for a variable with known zero mean: u* = u v*.
std::vector<BootstrapOutcome> multiplier_bootstrap(const Vector &u, const Matrix &z,
                                                   const std::vector<IcmFamily> &families,
                                                   const BootstrapConfig &cfg);

} // namespace gmdd

#endif
