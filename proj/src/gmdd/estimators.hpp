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

#ifndef GMDD_ESTIMATORS_HPP
#define GMDD_ESTIMATORS_HPP

#include <functional>
#include <optional>

#include "gmdd/types.hpp"

namespace gmdd {

enum class ModelKind { Ols, Iv, Nls };

/// Regression function g(x; beta) and its gradient for the NLS adapter.
/// `value` returns the n fitted values, `gradient` the n x k Jacobian.
struct NlsFunctions {
  std::function<Vector(const Matrix &x, const Vector &beta)> value;
  std::function<Matrix(const Matrix &x, const Vector &beta)> gradient;
  Vector start;
};

struct ModelSpec {
  ModelKind kind = ModelKind::Ols;
  Matrix x;           // n x k regressors (intercept already included if wanted)
  Matrix instruments; // n x k, IV only
  std::optional<NlsFunctions> nls;

  Eigen::Index k() const;
};

struct EstimationResult {
  Vector beta;
  Vector fitted;
  Vector residuals;
  Matrix phi;      // n x k influence weights
  Matrix gradient; // n x k, r_i = dg/dbeta at beta_hat
  double sigma = 0.0;
  int iterations = 0;
};

/// Model prepared once for repeated fits with different responses, as in the
/// wild bootstrap.
class PreparedModel {
public:
  explicit PreparedModel(ModelSpec spec);

  EstimationResult fit(const Vector &y) const;

  /// g(x_i; beta) and its gradient for arbitrary beta.
  Vector g(const Vector &beta) const;
  Matrix g_gradient(const Vector &beta) const;

  const ModelSpec &spec() const { return spec_; }
  Eigen::Index n() const { return spec_.x.rows(); }

private:
  EstimationResult fit_nls(const Vector &y) const;

  ModelSpec spec_;
  Matrix solve_;  // k x n map from y to beta (linear models)
  Matrix phi_;    // n x k influence weights (linear models)
};

EstimationResult fit(const ModelSpec &spec, const Vector &y);

} // namespace gmdd

#endif
