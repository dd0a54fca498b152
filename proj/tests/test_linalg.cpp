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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gmdd/error.hpp"
#include "gmdd/linalg.hpp"
#include "support.hpp"

namespace gmdd {
namespace {

// Cyclic Jacobi rotations; an eigen solver independent of Eigen's.
void jacobi_eigen(Matrix a, Vector &values, Matrix &vectors) {
  const Eigen::Index p = a.rows();
  vectors = Matrix::Identity(p, p);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j)
        off += a(i, j) * a(i, j);
    if (off < 1e-30)
      break;
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i + 1; j < p; ++j) {
        if (a(i, j) == 0.0)
          continue;
        const double theta = (a(j, j) - a(i, i)) / (2.0 * a(i, j));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aik = a(i, k), ajk = a(j, k);
          a(i, k) = c * aik - s * ajk;
          a(j, k) = s * aik + c * ajk;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aki = a(k, i), akj = a(k, j);
          a(k, i) = c * aki - s * akj;
          a(k, j) = s * aki + c * akj;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double vki = vectors(k, i), vkj = vectors(k, j);
          vectors(k, i) = c * vki - s * vkj;
          vectors(k, j) = s * vki + c * vkj;
        }
      }
    }
  }
  values = a.diagonal();
}

Matrix random_psd(Eigen::Index p, Eigen::Index rank, std::uint64_t seed, double scale) {
  const Matrix f = testing::normal_matrix(p, rank, seed);
  return scale * f * f.transpose();
}

TEST(Linalg, IdentityKeepsEverything) {
  const auto inv = thresholded_pinv(Matrix::Identity(3, 3), 100, 0.001);
  EXPECT_EQ(inv.retained_rank, 3);
  EXPECT_TRUE(inv.pseudo_inverse.isApprox(Matrix::Identity(3, 3), 1e-14));
  EXPECT_NEAR(inv.threshold, std::pow(100.0, -0.499), 1e-15);
}

TEST(Linalg, SmallEigenvalueIsDropped) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1e-9;
  const auto inv = thresholded_pinv(a, 400, 0.001);
  EXPECT_EQ(inv.retained_rank, 1);
  EXPECT_NEAR(inv.pseudo_inverse(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(inv.pseudo_inverse(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(inv.pseudo_inverse(0, 1), 0.0, 1e-15);
}

TEST(Linalg, MatchesRankTwoSpectralOracle) {
  const Matrix a = random_psd(4, 2, 5, 10.0);
  Vector values;
  Matrix vectors;
  jacobi_eigen(a, values, vectors);
  Matrix reference = Matrix::Zero(4, 4);
  for (Eigen::Index k = 0; k < 4; ++k)
    if (values[k] > 1.0)
      reference += vectors.col(k) * vectors.col(k).transpose() / values[k];
  const auto inv = thresholded_pinv(a, 200, 0.001);
  EXPECT_EQ(inv.retained_rank, 2);
  EXPECT_LT((inv.pseudo_inverse - reference).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Linalg, EigenvaluesMatchJacobiAndReconstruct) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Matrix a = testing::normal_matrix(5, 5, seed);
    a = (0.5 * (a + a.transpose())).eval();
    Vector ours;
    Matrix vecs;
    symmetric_eigen(a, ours, vecs);
    for (Eigen::Index k = 1; k < 5; ++k)
      EXPECT_GE(ours[k - 1], ours[k]);
    EXPECT_LT((vecs * ours.asDiagonal() * vecs.transpose() - a).cwiseAbs().maxCoeff(), 1e-8);
    Vector ref;
    Matrix unused;
    jacobi_eigen(a, ref, unused);
    std::sort(ref.data(), ref.data() + ref.size(), std::greater<>());
    EXPECT_LT((ours - ref).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Linalg, RankIsMonotoneInIota) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Matrix a = random_psd(4, 4, seed, 1.0);
    a += Matrix::Identity(4, 4) * 1e-3;
    Eigen::Index previous = 5;
    for (double iota = 0.001; iota < 0.5; iota += 0.05) {
      const auto inv = thresholded_pinv(a, 500, iota);
      EXPECT_LE(inv.retained_rank, previous);
      previous = inv.retained_rank;
    }
  }
}

TEST(Linalg, ScalarInverseIsExact) {
  const Matrix a = Matrix::Constant(1, 1, 0.3);
  const auto inv = thresholded_pinv(a, 1000, 0.001);
  EXPECT_EQ(inv.pseudo_inverse(0, 0), 1.0 / 0.3);
}

TEST(Linalg, TiesAndNegativesAreDropped) {
  // Powers of two keep the eigen solver's internal scaling exact.
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 4.0;
  a(1, 1) = 0.5;
  a(2, 2) = -2.0;
  const auto inv = thresholded_pinv(a, 16, 0.25);
  EXPECT_EQ(inv.threshold, 0.5);
  EXPECT_EQ(inv.eigenvalues[1], 0.5);
  EXPECT_EQ(inv.retained_rank, 1);
}

TEST(Linalg, RelativeModeIsScaleFree) {
  const Matrix a = random_psd(3, 3, 9, 1.0) + 1e-4 * Matrix::Identity(3, 3);
  const auto base = thresholded_pinv(a, 400, 0.001, ThresholdMode::Relative);
  for (double s : {1e-6, 1e-3, 1e3}) {
    const auto scaled = thresholded_pinv(s * a, 400, 0.001, ThresholdMode::Relative);
    EXPECT_EQ(scaled.retained_rank, base.retained_rank);
    EXPECT_TRUE(testing::near_rel(scaled.threshold, s * base.threshold, 1e-12));
    const Vector d = testing::normal_vector(3, 10);
    EXPECT_TRUE(testing::near_rel(regularized_wald(scaled, d, 400),
                                  regularized_wald(base, d, 400) / s, 1e-9));
  }
  const auto zero = thresholded_pinv(Matrix::Zero(2, 2), 400, 0.001, ThresholdMode::Relative);
  EXPECT_EQ(zero.retained_rank, 0);
  EXPECT_NE(degenerate_message(zero).find("degenerate covariance"), std::string::npos);
}

TEST(Linalg, WaldUsesRetainedPairs) {
  const Matrix a = random_psd(3, 3, 12, 1.0) + Matrix::Identity(3, 3);
  const Vector d = testing::normal_vector(3, 13);
  const auto inv = thresholded_pinv(a, 50, 0.001);
  ASSERT_EQ(inv.retained_rank, 3);
  EXPECT_NEAR(regularized_wald(inv, d, 50), 50.0 * d.dot(a.ldlt().solve(d)), 1e-10);
}

TEST(Linalg, Validation) {
  Matrix a = Matrix::Identity(2, 2);
  EXPECT_THROW(thresholded_pinv(a, 100, 0.0), ValidationError);
  EXPECT_THROW(thresholded_pinv(a, 100, 0.5), ValidationError);
  EXPECT_THROW(thresholded_pinv(Matrix::Identity(2, 3), 100, 0.1), ValidationError);
  a(0, 1) = NAN;
  EXPECT_THROW(thresholded_pinv(a, 100, 0.1), ValidationError);
  EXPECT_THROW(parse_threshold_mode("loose"), ValidationError);
}

} // namespace
} // namespace gmdd
