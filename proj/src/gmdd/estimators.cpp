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

#include "gmdd/estimators.hpp"

#include <cmath>
#include <string>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "gmdd/error.hpp"

namespace gmdd {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr int kMaxNlsIterations = 200;
constexpr double kNlsGradientTolerance = 1e-10;

void require_full_rank(const Matrix &m, const char *what) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector s = svd.singularValues();
  if (s.size() == 0 || !(s[s.size() - 1] > kRankTolerance * s[0]))
    throw ValidationError(std::string(what) + " does not have full column rank");
}

} // namespace

Eigen::Index ModelSpec::k() const {
  if (kind == ModelKind::Nls)
    return nls ? nls->start.size() : 0;
  return x.cols();
}

PreparedModel::PreparedModel(ModelSpec spec) : spec_(std::move(spec)) {
  const Eigen::Index n = spec_.x.rows();
  const Eigen::Index k = spec_.k();
  if (!spec_.x.allFinite())
    throw ValidationError("regressors contain non-finite values");
  if (k < 1)
    throw ValidationError("model needs at least one parameter");
  if (n <= k)
    throw ValidationError("need more observations than parameters");

  switch (spec_.kind) {
  case ModelKind::Ols: {
    require_full_rank(spec_.x, "regressor matrix");
    const Matrix xtx = spec_.x.transpose() * spec_.x;
    const Eigen::PartialPivLU<Matrix> lu(xtx);
    solve_ = lu.solve(spec_.x.transpose());
    phi_ = static_cast<double>(n) * solve_.transpose();
    break;
  }
  case ModelKind::Iv: {
    const Matrix &w = spec_.instruments;
    if (w.rows() != n)
      throw ValidationError("instruments and regressors have different row counts");
    if (w.cols() != k)
      throw ValidationError("IV estimation is just-identified: need " + std::to_string(k) +
                            " instruments, got " + std::to_string(w.cols()));
    if (!w.allFinite())
      throw ValidationError("instruments contain non-finite values");
    require_full_rank(spec_.x, "regressor matrix");
    require_full_rank(w, "instrument matrix");
    const Matrix wtx = w.transpose() * spec_.x;
    require_full_rank(wtx, "instrument cross-moment matrix");
    const Eigen::PartialPivLU<Matrix> lu(wtx);
    solve_ = lu.solve(w.transpose());
    phi_ = static_cast<double>(n) * solve_.transpose();
    break;
  }
  case ModelKind::Nls:
    if (!spec_.nls || !spec_.nls->value || !spec_.nls->gradient)
      throw ValidationError("NLS model needs g and its gradient");
    if (!spec_.nls->start.allFinite())
      throw ValidationError("NLS starting value is not finite");
    break;
  }
}

Vector PreparedModel::g(const Vector &beta) const {
  if (beta.size() != spec_.k())
    throw ValidationError("parameter vector has wrong length");
  if (spec_.kind == ModelKind::Nls)
    return spec_.nls->value(spec_.x, beta);
  return spec_.x * beta;
}

Matrix PreparedModel::g_gradient(const Vector &beta) const {
  if (beta.size() != spec_.k())
    throw ValidationError("parameter vector has wrong length");
  if (spec_.kind == ModelKind::Nls)
    return spec_.nls->gradient(spec_.x, beta);
  return spec_.x;
}

EstimationResult PreparedModel::fit(const Vector &y) const {
  if (y.size() != n())
    throw ValidationError("response has wrong length");
  if (!y.allFinite())
    throw ValidationError("response contains non-finite values");
  if (spec_.kind == ModelKind::Nls)
    return fit_nls(y);

  EstimationResult r;
  r.beta = solve_ * y;
  r.fitted = spec_.x * r.beta;
  r.residuals = y - r.fitted;
  r.phi = phi_;
  r.gradient = spec_.x;
  r.sigma = std::sqrt(r.residuals.squaredNorm() / static_cast<double>(n()));
  return r;
}

EstimationResult PreparedModel::fit_nls(const Vector &y) const {
  const auto nd = static_cast<double>(n());
  Vector beta = spec_.nls->start;
  Vector fitted = g(beta);
  double ssr = (y - fitted).squaredNorm();
  if (!std::isfinite(ssr))
    throw ComputationError("NLS objective is not finite at the starting value");

  EstimationResult r;
  bool converged = false;
  for (int it = 0; it < kMaxNlsIterations; ++it) {
    const Matrix jac = g_gradient(beta);
    const Vector resid = y - fitted;
    const Vector grad = jac.transpose() * resid;
    if (grad.norm() / nd < kNlsGradientTolerance) {
      converged = true;
      r.iterations = it;
      break;
    }
    const Vector step = jac.colPivHouseholderQr().solve(resid);
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Vector trial = beta + scale * step;
      const Vector trial_fit = g(trial);
      const double trial_ssr = (y - trial_fit).squaredNorm();
      if (std::isfinite(trial_ssr) && trial_ssr <= ssr) {
        improved = trial_ssr < ssr || scale * step.norm() == 0.0;
        beta = trial;
        fitted = trial_fit;
        ssr = trial_ssr;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) {
      // No decrease is possible at machine precision: a stationary point.
      converged = true;
      r.iterations = it + 1;
      break;
    }
  }
  if (!converged)
    throw ComputationError("NLS did not converge in " + std::to_string(kMaxNlsIterations) +
                           " iterations");

  r.beta = beta;
  r.fitted = fitted;
  r.residuals = y - fitted;
  r.gradient = g_gradient(beta);
  require_full_rank(r.gradient, "NLS gradient matrix");
  const Matrix m = r.gradient.transpose() * r.gradient / nd;
  r.phi = m.partialPivLu().solve(r.gradient.transpose()).transpose();
  r.sigma = std::sqrt(r.residuals.squaredNorm() / nd);
  return r;
}

EstimationResult fit(const ModelSpec &spec, const Vector &y) { return PreparedModel(spec).fit(y); }

} // namespace gmdd
