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

#ifndef GMDD_DGP_HPP
#define GMDD_DGP_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "gmdd/dataset.hpp"
#include "gmdd/estimators.hpp"

namespace gmdd {

enum class DgpId { LS1, LS2, LS3, LS4, LS5, MI1, MI2, MI3, MI4 };

DgpId parse_dgp(std::string_view text);
const char *dgp_name(DgpId id);
bool is_mean_independence(DgpId id);

struct DgpSpec {
  DgpId id = DgpId::LS1;
  std::size_t n = 200;
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

/// Regression DGPs yield columns y,x1,x2,z1,z2; mean-independence DGPs yield
/// u,z1,z2 (the conditioning pair) followed by xi1..xi4.
Dataset generate(const DgpSpec &spec);

/// Model, kernel argument and augmentation used for a regression DGP.
struct RegressionDesign {
  ModelSpec model;
  Vector y;
  Matrix z;
  std::optional<Vector> aug;
};

RegressionDesign regression_design(DgpId id, const Dataset &data);

} // namespace gmdd

#endif
