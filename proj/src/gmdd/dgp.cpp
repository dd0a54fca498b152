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

#include "gmdd/dgp.hpp"

#include <cmath>
#include <string>

#include "gmdd/distributions.hpp"
#include "gmdd/error.hpp"
#include "gmdd/random.hpp"

namespace gmdd {

namespace {

// Second coordinate of a standard bivariate normal with correlation rho,
// from independent standard normals e1 and e2.
double correlated(double rho, double e1, double e2) {
  return rho * e1 + std::sqrt(1.0 - rho * rho) * e2;
}

Dataset generate_regression(const DgpSpec &s) {
  const auto n = static_cast<Eigen::Index>(s.n);
  const double nd = static_cast<double>(s.n);
  const double g = s.gamma;
  const double ls4_scale = std::sqrt((1.0 - std::exp(-8.0)) / 2.0);
  Rng rng(s.seed);
  Matrix m(n, 5);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e1 = rng.normal(), e2 = rng.normal(), e3 = rng.normal(), e4 = rng.normal();
    const double z1 = e1;
    const double z2 = correlated(0.25, e1, e2);
    const double u = e3;
    const double u_tilde = correlated(0.5, e3, e4);
    double x1 = z1, x2 = z2;
    if (s.id == DgpId::LS2 || s.id == DgpId::LS3 || s.id == DgpId::LS4)
      x1 = (z1 + u_tilde) / std::sqrt(2.0);
    double y = x1 + x2 + u / std::sqrt(1.0 + x2 * x2);
    switch (s.id) {
    case DgpId::LS2:
      y += g * z1 * z1 / std::sqrt(2.0);
      break;
    case DgpId::LS3:
      y += 5.0 * g * z1 * z1 / std::sqrt(nd);
      break;
    case DgpId::LS4:
      y += g * std::sin(2.0 * z1) / ls4_scale;
      break;
    case DgpId::LS5:
      y += g * x1 * x2;
      break;
    default:
      break;
    }
    m.row(i) << y, x1, x2, z1, z2;
  }
  return Dataset({"y", "x1", "x2", "z1", "z2"}, std::move(m), dgp_name(s.id));
}

Dataset generate_mean_independence(const DgpSpec &s) {
  const auto n = static_cast<Eigen::Index>(s.n);
  const double nd = static_cast<double>(s.n);
  const double g = s.gamma;
  const double cutoff = -normal_quantile(0.25);
  Rng rng(s.seed);
  Matrix m(n, 7);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e1 = rng.normal(), e2 = rng.normal(), e3 = rng.normal(), e4 = rng.normal();
    const double eps = rng.normal();
    const double xi1 = e1, xi2 = correlated(0.25, e1, e2);
    const double xi3 = e3, xi4 = correlated(0.25, e3, e4);
    const double spread = 1.0 + xi3 * xi3 + xi4 * xi4;
    double u = 0.0, za = xi1, zb = xi4;
    switch (s.id) {
    case DgpId::MI1:
      u = xi1 + xi2 + eps / std::sqrt(spread);
      za = xi3;
      break;
    case DgpId::MI2:
      u = 0.5 * g * std::sqrt(xi1 * xi1 + xi2 * xi2) + eps / std::sqrt(2.0 * spread);
      break;
    case DgpId::MI3:
      u = 0.5 * g * (std::fabs(xi1) < cutoff ? 1.0 : 0.0) + eps / std::sqrt(2.0 * spread);
      break;
    case DgpId::MI4:
      u = g * (xi1 + xi2) * (xi1 + xi2) / std::sqrt(nd) + eps / std::sqrt(2.0 * spread);
      break;
    default:
      break;
    }
    m.row(i) << u, za, zb, xi1, xi2, xi3, xi4;
  }
  return Dataset({"u", "z1", "z2", "xi1", "xi2", "xi3", "xi4"}, std::move(m), dgp_name(s.id));
}

} // namespace

DgpId parse_dgp(std::string_view text) {
  static constexpr DgpId all[] = {DgpId::LS1, DgpId::LS2, DgpId::LS3, DgpId::LS4, DgpId::LS5,
                                  DgpId::MI1, DgpId::MI2, DgpId::MI3, DgpId::MI4};
  for (DgpId id : all) {
    if (text == dgp_name(id))
      return id;
  }
  throw ValidationError("unknown DGP '" + std::string(text) + "' (expected LS1..LS5 or MI1..MI4)");
}

const char *dgp_name(DgpId id) {
  switch (id) {
  case DgpId::LS1:
    return "LS1";
  case DgpId::LS2:
    return "LS2";
  case DgpId::LS3:
    return "LS3";
  case DgpId::LS4:
    return "LS4";
  case DgpId::LS5:
    return "LS5";
  case DgpId::MI1:
    return "MI1";
  case DgpId::MI2:
    return "MI2";
  case DgpId::MI3:
    return "MI3";
  case DgpId::MI4:
    return "MI4";
  }
  return "?";
}

bool is_mean_independence(DgpId id) {
  return id == DgpId::MI1 || id == DgpId::MI2 || id == DgpId::MI3 || id == DgpId::MI4;
}

Dataset generate(const DgpSpec &spec) {
  if (spec.n < 2)
    throw ValidationError("DGP sample size must be at least 2");
  if (!std::isfinite(spec.gamma))
    throw ValidationError("gamma must be finite");
  return is_mean_independence(spec.id) ? generate_mean_independence(spec)
                                       : generate_regression(spec);
}

RegressionDesign regression_design(DgpId id, const Dataset &data) {
  if (is_mean_independence(id))
    throw ValidationError("DGP " + std::string(dgp_name(id)) + " is not a regression design");
  RegressionDesign d;
  d.y = data.column("y");
  d.model.x = data.columns({"x1", "x2"});
  d.z = data.columns({"z1", "z2"});
  const bool endogenous = id == DgpId::LS2 || id == DgpId::LS3 || id == DgpId::LS4;
  if (endogenous) {
    d.model.kind = ModelKind::Iv;
    d.model.instruments = d.z;
  } else {
    d.model.kind = ModelKind::Ols;
    d.z = d.model.x;
  }
  const Vector z1 = d.z.col(0), z2 = d.z.col(1);
  if (id == DgpId::LS3 || id == DgpId::LS4)
    d.aug = (z1.array().square() + z2.array().square() + z1.array() * z2.array()).matrix();
  else if (id == DgpId::LS5)
    d.aug = z1.cwiseProduct(z2);
  return d;
}

} // namespace gmdd
