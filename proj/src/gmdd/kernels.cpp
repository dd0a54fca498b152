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

#include "gmdd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gmdd/error.hpp"
#include "gmdd/parallel.hpp"

namespace gmdd {

namespace {

constexpr double kTaylorCutoff = 1e-4;

// sin(t)/t for t >= 0, with value 1 at the origin.
double sinc(double t) {
  if (t < kTaylorCutoff) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

void require_dim(std::size_t dim) {
  if (dim == 0)
    throw ValidationError("kernel dimension must be positive");
}

double parse_real(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ValidationError("invalid " + std::string(what) + " '" + s + "' in kernel spec");
  return v;
}

} // namespace

KernelSpec KernelSpec::gauss(std::size_t dim) {
  require_dim(dim);
  return {KernelFamily::Gauss, dim};
}

KernelSpec KernelSpec::mdd(std::size_t dim) {
  require_dim(dim);
  return {KernelFamily::Mdd, dim};
}

KernelSpec KernelSpec::srb(double alpha, std::size_t dim) {
  require_dim(dim);
  if (!(alpha > 0.0 && alpha < 2.0))
    throw ValidationError("srb kernel requires alpha in (0, 2)");
  KernelSpec k{KernelFamily::Srb, dim};
  k.alpha_ = alpha;
  return k;
}

KernelSpec KernelSpec::laplace(double sigma, std::size_t dim) {
  require_dim(dim);
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ValidationError("laplace kernel requires sigma > 0");
  KernelSpec k{KernelFamily::Laplace, dim};
  k.sigma_ = sigma;
  return k;
}

KernelSpec KernelSpec::uniform(std::vector<double> widths) {
  require_dim(widths.size());
  for (double a : widths) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw ValidationError("uniform kernel widths must be positive");
  }
  KernelSpec k{KernelFamily::Uniform, widths.size()};
  k.widths_ = std::move(widths);
  return k;
}

KernelSpec KernelSpec::triangular(std::size_t dim) {
  require_dim(dim);
  return {KernelFamily::Triangular, dim};
}

KernelSpec KernelSpec::logistic(std::size_t dim) {
  require_dim(dim);
  return {KernelFamily::Logistic, dim};
}

KernelSpec KernelSpec::cauchy(std::size_t dim) {
  require_dim(dim);
  return {KernelFamily::Cauchy, dim};
}

KernelSpec KernelSpec::parse(std::string_view text, std::size_t dim) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  const std::string_view arg = has_arg ? text.substr(colon + 1) : std::string_view{};

  auto no_arg = [&](KernelSpec k) {
    if (has_arg)
      throw ValidationError("kernel '" + std::string(head) + "' takes no parameter");
    return k;
  };

  if (head == "gauss")
    return no_arg(gauss(dim));
  if (head == "mdd")
    return no_arg(mdd(dim));
  if (head == "srb") {
    if (!has_arg)
      throw ValidationError("srb kernel needs an exponent, e.g. srb:0.5");
    return srb(parse_real(arg, "alpha"), dim);
  }
  if (head == "laplace")
    return laplace(has_arg ? parse_real(arg, "sigma") : 1.0, dim);
  if (head == "uniform")
    return no_arg(uniform(dim));
  if (head == "triangular")
    return no_arg(triangular(dim));
  if (head == "logistic")
    return no_arg(logistic(dim));
  if (head == "cauchy")
    return no_arg(cauchy(dim));
  throw ValidationError("unknown kernel '" + std::string(text) + "'");
}

bool KernelSpec::integrable() const {
  return family_ != KernelFamily::Mdd && family_ != KernelFamily::Srb;
}

KernelSpec KernelSpec::negated() const {
  KernelSpec k = *this;
  k.sign_ = -sign_;
  return k;
}

std::string KernelSpec::name() const {
  std::ostringstream os;
  if (sign_ < 0)
    os << "-";
  switch (family_) {
  case KernelFamily::Gauss:
    os << "gauss";
    break;
  case KernelFamily::Mdd:
    os << "mdd";
    break;
  case KernelFamily::Srb:
    os << "srb:" << alpha_;
    break;
  case KernelFamily::Laplace:
    os << "laplace:" << sigma_;
    break;
  case KernelFamily::Uniform:
    os << "uniform";
    break;
  case KernelFamily::Triangular:
    os << "triangular";
    break;
  case KernelFamily::Logistic:
    os << "logistic";
    break;
  case KernelFamily::Cauchy:
    os << "cauchy";
    break;
  }
  return os.str();
}

double KernelSpec::eval_unchecked(const double *a, const double *b) const {
  double value = 0.0;
  switch (family_) {
  case KernelFamily::Gauss:
  case KernelFamily::Mdd:
  case KernelFamily::Srb:
  case KernelFamily::Laplace: {
    double sq = 0.0;
    for (std::size_t l = 0; l < dim_; ++l) {
      const double d = a[l] - b[l];
      sq += d * d;
    }
    if (family_ == KernelFamily::Gauss)
      value = -std::exp(-0.5 * sq);
    else if (family_ == KernelFamily::Mdd)
      value = std::sqrt(sq);
    else if (family_ == KernelFamily::Srb)
      value = sq == 0.0 ? 0.0 : std::pow(sq, 0.5 * alpha_);
    else
      value = -std::exp(-std::sqrt(sq) / sigma_);
    break;
  }
  case KernelFamily::Uniform: {
    double prod = 1.0;
    for (std::size_t l = 0; l < dim_; ++l)
      prod *= sinc(std::fabs(widths_[l] * (a[l] - b[l])));
    value = -prod;
    break;
  }
  case KernelFamily::Triangular: {
    // Fourier transform of the triangular density on [-1, 1]:
    // 2(1 - cos t)/t^2 = (sin(t/2)/(t/2))^2.
    double prod = 1.0;
    for (std::size_t l = 0; l < dim_; ++l) {
      const double s = sinc(0.5 * std::fabs(a[l] - b[l]));
      prod *= s * s;
    }
    value = -prod;
    break;
  }
  case KernelFamily::Logistic: {
    double prod = 1.0;
    for (std::size_t l = 0; l < dim_; ++l) {
      const double e = std::exp(-std::fabs(a[l] - b[l]));
      const double q = 1.0 + e;
      prod *= e / (q * q);
    }
    value = -prod;
    break;
  }
  case KernelFamily::Cauchy: {
    double prod = 1.0;
    for (std::size_t l = 0; l < dim_; ++l) {
      const double d = a[l] - b[l];
      prod *= 1.0 / (std::numbers::pi * (1.0 + d * d));
    }
    value = -prod;
    break;
  }
  }
  return sign_ * value;
}

double KernelSpec::between(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != dim_ || b.size() != dim_)
    throw ValidationError("kernel dimension mismatch");
  return eval_unchecked(a.data(), b.data());
}

double KernelSpec::operator()(std::span<const double> z) const {
  if (z.size() != dim_) {
    throw ValidationError("kernel expects dimension " + std::to_string(dim_) + ", got " +
                          std::to_string(z.size()));
  }
  for (double v : z) {
    if (!std::isfinite(v))
      throw ValidationError("kernel argument is not finite");
  }
  const std::vector<double> zero(dim_, 0.0);
  return eval_unchecked(z.data(), zero.data());
}

double eval_kernel(const KernelSpec &spec, std::span<const double> z) { return spec(z); }

Matrix kernel_matrix(const KernelSpec &spec, const Matrix &z) {
  if (static_cast<std::size_t>(z.cols()) != spec.dim()) {
    throw ValidationError("kernel expects " + std::to_string(spec.dim()) + " columns, got " +
                          std::to_string(z.cols()));
  }
  if (!z.allFinite())
    throw ValidationError("kernel input contains non-finite values");

  const auto n = static_cast<std::size_t>(z.rows());
  const std::size_t p = spec.dim();
  // Row-major copy so each observation is contiguous.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = z;
  const double *base = rows.data();

  const auto ni = static_cast<Eigen::Index>(n);
  Matrix k(ni, ni);
  const std::vector<double> zero(p, 0.0);
  const double diag = spec.between(zero, zero);
  const KernelFamily fam = spec.family();
  const bool radial =
      fam == KernelFamily::Gauss || fam == KernelFamily::Mdd || fam == KernelFamily::Laplace;

  // Upper triangle column by column, so writes are contiguous. Radial
  // families transform a whole column of squared distances at once.
  parallel_for(n, [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const double *b = base + jj * p;
    k(j, j) = diag;
    if (!radial) {
      for (std::size_t i = 0; i < jj; ++i)
        k(static_cast<Eigen::Index>(i), j) = spec.between({base + i * p, p}, {b, p});
      return;
    }
    for (std::size_t i = 0; i < jj; ++i) {
      const double *a = base + i * p;
      double sq = 0.0;
      for (std::size_t l = 0; l < p; ++l) {
        const double d = a[l] - b[l];
        sq += d * d;
      }
      k(static_cast<Eigen::Index>(i), j) = sq;
    }
    auto col = k.col(j).head(j).array();
    if (fam == KernelFamily::Gauss)
      col = -spec.sign() * (-0.5 * col).exp();
    else if (fam == KernelFamily::Mdd)
      col = spec.sign() * col.sqrt();
    else
      col = -spec.sign() * (-col.sqrt() / spec.sigma()).exp();
  });
  // Mirror in tiles to keep both sides in cache.
  constexpr Eigen::Index tile = 32;
  for (Eigen::Index jb = 0; jb < ni; jb += tile)
    for (Eigen::Index ib = jb; ib < ni; ib += tile)
      for (Eigen::Index j = jb; j < std::min(jb + tile, ni); ++j)
        for (Eigen::Index i = std::max(ib, j + 1); i < std::min(ib + tile, ni); ++i)
          k(i, j) = k(j, i);
  return k;
}

} // namespace gmdd
