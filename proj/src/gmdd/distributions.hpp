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

#ifndef GMDD_DISTRIBUTIONS_HPP
#define GMDD_DISTRIBUTIONS_HPP

namespace gmdd {

/// Upper tail P(chi2_df > x).
double chi2_sf(double x, double df);
double chi2_cdf(double x, double df);

double normal_cdf(double x);
double normal_quantile(double p);

/// 2 P(N(0,1) > |t|).
double normal_two_sided_p(double t);

} // namespace gmdd

#endif
