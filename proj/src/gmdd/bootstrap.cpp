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

#include "gmdd/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "gmdd/error.hpp"
#include "gmdd/kernels.hpp"
#include "gmdd/metric.hpp"
#include "gmdd/parallel.hpp"
#include "gmdd/random.hpp"

namespace gmdd {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// c_ijr for two difference vectors a = Z_i - Z_r and b = Z_j - Z_r: pi minus
// the angle between them, pi when exactly one vanishes, 2 pi when both do.
double angular_weight(const double *a, const double *b, std::size_t p) {
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (std::size_t l = 0; l < p; ++l) {
    aa += a[l] * a[l];
    bb += b[l] * b[l];
    ab += a[l] * b[l];
  }
  if (aa == 0.0 && bb == 0.0)
    return 2.0 * std::numbers::pi;
  if (aa == 0.0 || bb == 0.0)
    return std::numbers::pi;
  const double c = std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
  return std::numbers::pi - std::acos(c);
}

Matrix esc6_weights_planar(const Matrix &z) {
  const Eigen::Index n = z.rows();
  // Column r holds the angles of Z_i - Z_r, NaN where Z_i == Z_r.
  Matrix angle(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dx = z(i, 0) - z(r, 0);
      const double dy = z(i, 1) - z(r, 1);
      angle(i, r) = (dx == 0.0 && dy == 0.0) ? std::nan("") : std::atan2(dy, dx);
    }
  }
  Matrix a(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    for (Eigen::Index j = i; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        const double ai = angle(i, r);
        const double aj = angle(j, r);
        const bool zi = std::isnan(ai), zj = std::isnan(aj);
        if (zi && zj)
          s += 2.0 * std::numbers::pi;
        else if (zi || zj)
          s += std::numbers::pi;
        else
          s += std::fabs(std::numbers::pi - std::fabs(ai - aj));
      }
      a(i, j) = s / static_cast<double>(n);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      a(i, j) = a(j, i);
  return a;
}

void check_z(const Matrix &z) {
  if (z.rows() < 2)
    throw ValidationError("need at least 2 observations");
  if (z.cols() < 1)
    throw ValidationError("Z needs at least one column");
  if (!z.allFinite())
    throw ValidationError("Z contains non-finite values");
}

double draw_multiplier(Rng &rng, Multiplier m) {
  const double u = rng.uniform();
  if (m == Multiplier::Rademacher)
    return u < 0.5 ? -1.0 : 1.0;
  const double s5 = std::sqrt(5.0);
  const double p_low = (s5 + 1.0) / (2.0 * s5);
  return u < p_low ? (1.0 - s5) / 2.0 : (1.0 + s5) / 2.0;
}

std::vector<BootstrapOutcome> run_bootstrap(
    const Vector &u, const Matrix &z, const std::vector<IcmFamily> &families,
    const BootstrapConfig &cfg, const std::function<Vector(std::size_t, const Vector &)> &resample) {
  if (cfg.B < 1)
    throw ValidationError("number of bootstrap replicates must be at least 1");
  if (families.empty())
    throw ValidationError("no bootstrap family requested");
  check_z(z);
  if (u.size() != z.rows())
    throw ValidationError("residuals and Z have different numbers of rows");

  std::vector<IcmStatistic> stats;
  stats.reserve(families.size());
  for (IcmFamily f : families)
    stats.emplace_back(f, z);

  const std::size_t nf = families.size();
  std::vector<double> observed(nf);
  for (std::size_t f = 0; f < nf; ++f)
    observed[f] = stats[f](u);

  const auto B = static_cast<std::size_t>(cfg.B);
  std::vector<double> replicate(B * nf);
  std::vector<std::string> failures(B);
  parallel_for(B, [&](std::size_t b) {
    try {
      const Vector ustar = resample(b, bootstrap_multipliers(cfg, b, u.size()));
      for (std::size_t f = 0; f < nf; ++f)
        replicate[b * nf + f] = stats[f](ustar);
    } catch (const std::exception &e) {
      failures[b] = e.what();
      if (failures[b].empty())
        failures[b] = "unknown error";
    }
  });
  for (std::size_t b = 0; b < B; ++b) {
    if (!failures[b].empty())
      throw ComputationError("bootstrap replicate " + std::to_string(b) + " failed: " +
                             failures[b]);
  }

  std::vector<BootstrapOutcome> out;
  for (std::size_t f = 0; f < nf; ++f) {
    std::size_t exceed = 0;
    for (std::size_t b = 0; b < B; ++b) {
      if (replicate[b * nf + f] >= observed[f])
        ++exceed;
    }
    out.push_back({families[f], observed[f],
                   static_cast<double>(1 + exceed) / static_cast<double>(B + 1)});
  }
  return out;
}

} // namespace

IcmFamily parse_icm_family(std::string_view text) {
  if (text == "gauss")
    return IcmFamily::Gauss;
  if (text == "mdd")
    return IcmFamily::Mdd;
  if (text == "dl")
    return IcmFamily::Dl;
  if (text == "esc6")
    return IcmFamily::Esc6;
  throw ValidationError("unknown bootstrap family '" + std::string(text) +
                        "' (expected gauss, mdd, dl or esc6)");
}

const char *icm_family_name(IcmFamily f) {
  switch (f) {
  case IcmFamily::Gauss:
    return "gauss";
  case IcmFamily::Mdd:
    return "mdd";
  case IcmFamily::Dl:
    return "dl";
  case IcmFamily::Esc6:
    return "esc6";
  }
  return "?";
}

Multiplier parse_multiplier(std::string_view text) {
  if (text == "mammen")
    return Multiplier::Mammen;
  if (text == "rademacher")
    return Multiplier::Rademacher;
  throw ValidationError("unknown multiplier '" + std::string(text) +
                        "' (expected mammen or rademacher)");
}

Matrix esc6_weights(const Matrix &z) {
  check_z(z);
  const Eigen::Index n = z.rows();
  const auto p = static_cast<std::size_t>(z.cols());
  const RowMajor rows = z;
  const double *base = rows.data();
  Matrix a(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    std::vector<double> di(p), dj(p);
    for (std::size_t j = i; j < static_cast<std::size_t>(n); ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) {
        for (std::size_t l = 0; l < p; ++l) {
          di[l] = base[i * p + l] - base[r * p + l];
          dj[l] = base[j * p + l] - base[r * p + l];
        }
        s += angular_weight(di.data(), dj.data(), p);
      }
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s / static_cast<double>(n);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      a(i, j) = a(j, i);
  return a;
}

IcmStatistic::IcmStatistic(IcmFamily family, const Matrix &z) : family_(family), n_(z.rows()) {
  check_z(z);
  const auto p = static_cast<std::size_t>(z.cols());
  switch (family_) {
  case IcmFamily::Gauss:
    m_ = kernel_matrix(KernelSpec::gauss(p), z);
    break;
  case IcmFamily::Mdd:
    m_ = kernel_matrix(KernelSpec::mdd(p), z);
    break;
  case IcmFamily::Dl: {
    // Column k holds the indicators 1(Z_i <= Z_k) componentwise.
    m_.resize(n_, n_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      for (Eigen::Index i = 0; i < n_; ++i)
        m_(i, k) = (z.row(i).array() <= z.row(k).array()).all() ? 1.0 : 0.0;
    }
    break;
  }
  case IcmFamily::Esc6:
    m_ = p == 2 ? esc6_weights_planar(z) : esc6_weights(z);
    break;
  }
}

double IcmStatistic::operator()(const Vector &u) const {
  if (u.size() != n_)
    throw ValidationError("residual vector has wrong length");
  const auto nd = static_cast<double>(n_);
  switch (family_) {
  case IcmFamily::Gauss:
  case IcmFamily::Mdd:
    return nd * gmdd_plugin_mean_kmat(u, m_);
  case IcmFamily::Dl: {
    const Vector partial = m_.transpose() * u;
    return partial.squaredNorm() / nd;
  }
  case IcmFamily::Esc6:
    return u.dot(m_ * u);
  }
  return 0.0;
}

double icm_statistic(const Vector &u, const Matrix &z, IcmFamily family) {
  if (!u.allFinite())
    throw ValidationError("residuals contain non-finite values");
  return IcmStatistic(family, z)(u);
}

Vector bootstrap_multipliers(const BootstrapConfig &cfg, std::size_t b, Eigen::Index n) {
  Rng rng(derive_seed(cfg.seed, b));
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = draw_multiplier(rng, cfg.multiplier);
  return v;
}

std::vector<BootstrapOutcome> wild_bootstrap(const PreparedModel &model, const Vector &y,
                                             const Matrix &z,
                                             const std::vector<IcmFamily> &families,
                                             const BootstrapConfig &cfg) {
  const EstimationResult est = model.fit(y);
  return run_bootstrap(est.residuals, z, families, cfg,
                       [&](std::size_t, const Vector &v) {
                         const Vector ystar =
                             est.fitted + est.residuals.cwiseProduct(v);
                         return model.fit(ystar).residuals;
                       });
}

std::vector<BootstrapOutcome> multiplier_bootstrap(const Vector &u, const Matrix &z,
                                                   const std::vector<IcmFamily> &families,
                                                   const BootstrapConfig &cfg) {
  if (!u.allFinite())
    throw ValidationError("u contains non-finite values");
  return run_bootstrap(u, z, families, cfg,
                       [&](std::size_t, const Vector &v) { return Vector(u.cwiseProduct(v)); });
}

} // namespace gmdd
