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

#ifndef GMDD_KERNELS_HPP
#define GMDD_KERNELS_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmdd/types.hpp"

namespace gmdd {

enum class KernelFamily {
  Gauss,
  Mdd,
  Srb,
  Laplace,
  Uniform,
  Triangular,
  Logistic,
  Cauchy,
};

/// Weight function K(z) of a GMDD metric on R^p.
///
/// Integrable families are stored as the negated Fourier transform (or the
/// negated bounded density), distance families as ||z||^alpha. Additive
/// constants are dropped since K only enters centered sums.
class KernelSpec {
public:
  static KernelSpec gauss(std::size_t dim);
  static KernelSpec mdd(std::size_t dim);
  static KernelSpec srb(double alpha, std::size_t dim);
  static KernelSpec laplace(double sigma, std::size_t dim);
  static KernelSpec uniform(std::vector<double> widths);
  static KernelSpec uniform(std::size_t dim) { return uniform(std::vector<double>(dim, 1.0)); }
  static KernelSpec triangular(std::size_t dim);
  static KernelSpec logistic(std::size_t dim);
  static KernelSpec cauchy(std::size_t dim);

  /// Parses the CLI form `gauss|mdd|srb:<alpha>|laplace:<sigma>|uniform|
  /// triangular|logistic|cauchy` for dimension `dim`.
  static KernelSpec parse(std::string_view text, std::size_t dim);

  KernelFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  const std::vector<double> &widths() const { return widths_; }
  bool integrable() const;

  /// The same kernel with K replaced by -K.
  KernelSpec negated() const;
  double sign() const { return sign_; }

  std::string name() const;

  double operator()(std::span<const double> z) const;

  /// K(a - b) without materializing the difference.
  double between(std::span<const double> a, std::span<const double> b) const;

private:
  KernelSpec(KernelFamily family, std::size_t dim) : family_(family), dim_(dim) {}
  double eval_unchecked(const double *a, const double *b) const;

  KernelFamily family_;
  std::size_t dim_;
  double alpha_ = 1.0;
  double sigma_ = 1.0;
  std::vector<double> widths_;
  double sign_ = 1.0;
};

double eval_kernel(const KernelSpec &spec, std::span<const double> z);

/// n x n matrix of K(Z_i - Z_j). Rows of `z` are observations.
Matrix kernel_matrix(const KernelSpec &spec, const Matrix &z);

} // namespace gmdd

#endif
