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

#include "gmdd/distributions.hpp"

#include <cmath>
#include <numbers>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gmdd/error.hpp"

namespace gmdd {

namespace {

void check_chi2(double x, double df) {
  if (!(df > 0.0) || !std::isfinite(df))
    throw ValidationError("chi-square degrees of freedom must be positive");
  if (std::isnan(x))
    throw ValidationError("chi-square argument is NaN");
}

} // namespace

double chi2_sf(double x, double df) {
  check_chi2(x, df);
  if (x <= 0.0)
    return 1.0;
  if (std::isinf(x))
    return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chi2_cdf(double x, double df) {
  check_chi2(x, df);
  if (x <= 0.0)
    return 0.0;
  if (std::isinf(x))
    return 1.0;
  return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ValidationError("normal quantile requires p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double normal_two_sided_p(double t) { return std::erfc(std::fabs(t) / std::numbers::sqrt2); }

} // namespace gmdd
