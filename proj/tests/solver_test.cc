// Copyright 2026 The dpnmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpnmf/solver.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "dpnmf/data_io.h"
#include "dpnmf/init.h"
#include "test_support.h"

namespace dpnmf {
namespace {

using test::BitEqual;
using test::CentralDifference;
using test::RandomMatrix;
using test::RandomUnitBallColumns;
using test::SoftThresholdGridOracle;

TEST(CoefficientGradient, ZeroWhenCoefficientsReproduceData) {
  std::mt19937_64 gen(31);
  const Matrix v = RandomMatrix(3, 4, gen);
  const Dictionary w(Matrix::Identity(3, 3));
  const Coefficients h(v);
  const Outliers r = ZeroOutliers(3, 4, 1.0);
  const Matrix grad = CoefficientGradient(DataMatrix(v), w, h, r);
  EXPECT_TRUE(BitEqual(grad, Matrix::Zero(3, 4)));
}

TEST(CoefficientGradient, ZeroForZeroDictionary) {
  std::mt19937_64 gen(32);
  const Matrix v = RandomMatrix(3, 4, gen);
  const Dictionary w(Matrix::Zero(3, 2));
  const Coefficients h(RandomMatrix(2, 4, gen));
  const Outliers r = ZeroOutliers(3, 4, 1.0);
  const Matrix grad = CoefficientGradient(DataMatrix(v), w, h, r);
  EXPECT_TRUE(BitEqual(grad, Matrix::Zero(2, 4)));
}

TEST(CoefficientGradient, MatchesFiniteDifference) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index rows = 3 + trial;
    const Eigen::Index cols = 4 + trial;
    const Eigen::Index k = 1 + trial % 3;
    const Matrix v = RandomMatrix(rows, cols, gen);
    const Matrix w = RandomUnitBallColumns(rows, k, gen);
    const Matrix h = RandomMatrix(k, cols, gen);
    const Matrix r = RandomMatrix(rows, cols, gen, -0.5, 0.5);

    const Matrix analytic = CoefficientGradient(
        DataMatrix(v), Dictionary(w), Coefficients(h), Outliers(r, 1.0));

    const auto potential = [&](const Matrix& point) {
      return 0.5 * (v - w * point - r).squaredNorm() /
             static_cast<double>(cols);
    };
    Matrix numeric(k, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < k; ++i) {
        numeric(i, j) = CentralDifference(potential, h, i, j, 1e-6);
      }
    }
    ASSERT_LT((analytic - numeric).norm() / std::max(analytic.norm(), 1e-12),
              1e-5);
  }
}

TEST(CoefficientStep, FixedPointAtZeroGradient) {
  std::mt19937_64 gen(34);
  const Coefficients h(RandomMatrix(3, 5, gen));
  const Coefficients next =
      CoefficientStep(h, Matrix::Zero(3, 5), 0.1, false);
  EXPECT_TRUE(BitEqual(next.values(), h.values()));
}

TEST(CoefficientStep, ClampsNegativePreProjectionValues) {
  const Coefficients h(Matrix::Ones(1, 1));
  Matrix grad(1, 1);
  grad << 2.0;
  const Coefficients next = CoefficientStep(h, grad, 1.0, false);
  EXPECT_EQ(next.values()(0, 0), 0.0);
}

TEST(CoefficientStep, PrivacyModeRescalesLongColumns) {
  Matrix values(2, 1);
  values << 1.2, 1.6;  // norm 2
  const Coefficients h(values);
  const Coefficients next =
      CoefficientStep(h, Matrix::Zero(2, 1), 0.1, true);
  EXPECT_DOUBLE_EQ(next.values()(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(next.values()(1, 0), 0.8);
  EXPECT_NEAR(next.values().col(0).norm(), 1.0, 1e-15);

  // Without privacy mode the same input passes through unchanged.
  const Coefficients plain =
      CoefficientStep(h, Matrix::Zero(2, 1), 0.1, false);
  EXPECT_TRUE(BitEqual(plain.values(), values));
}

TEST(OutlierStep, ZeroAtExactFactorization) {
  std::mt19937_64 gen(35);
  const Matrix w = RandomUnitBallColumns(4, 2, gen);
  const Matrix h = RandomMatrix(2, 6, gen);
  const Matrix v = w * h;
  const Outliers r = OutlierStep(DataMatrix(v), Dictionary(w),
                                 Coefficients(h), 0.1, 1.0, false);
  EXPECT_TRUE(BitEqual(r.values(), Matrix::Zero(4, 6)));
}

TEST(OutlierStep, SaturatesAtBound) {
  const double penalty = 0.1;
  const double bound = 1.0;
  Matrix v(1, 1);
  v << penalty + bound + 5.0;
  const Outliers r =
      OutlierStep(DataMatrix(v), Dictionary(Matrix::Zero(1, 1)),
                  Coefficients(Matrix::Zero(1, 1)), penalty, bound, false);
  EXPECT_EQ(r.values()(0, 0), bound);
}

TEST(OutlierStep, MatchesEntrywiseGridOracle) {
  std::mt19937_64 gen(36);
  const double penalty = 0.1;
  const double bound = 1.0;
  const Matrix w = RandomUnitBallColumns(4, 2, gen);
  const Matrix h = RandomMatrix(2, 5, gen);
  const Matrix v = RandomMatrix(4, 5, gen, 0.0, 2.0);
  const Outliers r = OutlierStep(DataMatrix(v), Dictionary(w),
                                 Coefficients(h), penalty, bound, false);
  const Matrix residual = v - w * h;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double oracle =
          SoftThresholdGridOracle(residual(i, j), penalty, bound);
      ASSERT_NEAR(r.values()(i, j), oracle, 1e-3);
    }
  }
}

TEST(OutlierStep, PrivacyModeRescalesLongColumns) {
  Matrix v(2, 1);
  v << 2.0, 2.0;
  const Outliers r =
      OutlierStep(DataMatrix(v), Dictionary(Matrix::Zero(2, 1)),
                  Coefficients(Matrix::Zero(1, 1)), 0.0, 2.0, true);
  EXPECT_NEAR(r.values().col(0).norm(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.values()(0, 0), r.values()(1, 0));
}

TEST(ComputeStatistics, OuterProductExamples) {
  Matrix h(2, 1);
  h << 1.0, 0.0;
  Matrix v(2, 1);
  v << 1.0, 0.0;
  const GradientStatistics stats = ComputeStatistics(
      DataMatrix(v), Coefficients(h), ZeroOutliers(2, 1, 1.0));
  Matrix expected(2, 2);
  expected << 1.0, 0.0, 0.0, 0.0;
  EXPECT_TRUE(BitEqual(stats.coeff_gram, expected));
  EXPECT_TRUE(BitEqual(stats.data_cross, expected));
}

TEST(ComputeStatistics, ZeroCoefficients) {
  const GradientStatistics stats =
      ComputeStatistics(DataMatrix(Matrix::Ones(3, 4)),
                        Coefficients(Matrix::Zero(2, 4)),
                        ZeroOutliers(3, 4, 1.0));
  EXPECT_TRUE(BitEqual(stats.coeff_gram, Matrix::Zero(2, 2)));
  EXPECT_TRUE(BitEqual(stats.data_cross, Matrix::Zero(3, 2)));
}

TEST(ComputeStatistics, GramExactlySymmetricAndPsd) {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index rows = 3 + trial % 4;
    const Eigen::Index cols = 5 + trial % 6;
    const Eigen::Index k = 2 + trial % 3;
    const Matrix v = RandomMatrix(rows, cols, gen);
    const Matrix h = RandomMatrix(k, cols, gen);
    const Matrix r = RandomMatrix(rows, cols, gen, -0.4, 0.4);
    const GradientStatistics stats = ComputeStatistics(
        DataMatrix(v), Coefficients(h), Outliers(r, 1.0));

    ASSERT_TRUE(BitEqual(stats.coeff_gram, stats.coeff_gram.transpose()));
    Eigen::SelfAdjointEigenSolver<Matrix> eigen(stats.coeff_gram);
    ASSERT_GE(eigen.eigenvalues().minCoeff(), -1e-10);

    // Scalar-loop oracles for both statistics.
    const double n = static_cast<double>(cols);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < cols; ++j) sum += h(a, j) * h(b, j);
        ASSERT_NEAR(stats.coeff_gram(a, b), sum / n, 1e-12);
      }
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index b = 0; b < k; ++b) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
          sum += (v(i, j) - r(i, j)) * h(b, j);
        }
        ASSERT_NEAR(stats.data_cross(i, b), sum / n, 1e-12);
      }
    }
  }
}

TEST(DictionaryGradient, IdentityExample) {
  GradientStatistics stats;
  stats.coeff_gram = Matrix::Identity(3, 3);
  stats.data_cross = Matrix::Zero(3, 3);
  const Matrix grad = DictionaryGradient(Dictionary(Matrix::Identity(3, 3)),
                                         stats);
  EXPECT_TRUE(BitEqual(grad, Matrix::Identity(3, 3)));
}

TEST(DictionaryGradient, ZeroAtStationarity) {
  std::mt19937_64 gen(38);
  const Matrix w = RandomUnitBallColumns(4, 2, gen);
  const Matrix h = RandomMatrix(2, 6, gen);
  GradientStatistics stats = ComputeStatistics(
      DataMatrix(Matrix::Ones(4, 6)), Coefficients(h), ZeroOutliers(4, 6, 1.0));
  stats.data_cross = w * stats.coeff_gram;
  const Matrix grad = DictionaryGradient(Dictionary(w), stats);
  EXPECT_TRUE(BitEqual(grad, Matrix::Zero(4, 2)));
}

TEST(DictionaryGradient, MatchesFiniteDifference) {
  std::mt19937_64 gen(39);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index rows = 4 + trial;
    const Eigen::Index cols = 6 + trial;
    const Eigen::Index k = 1 + trial % 3;
    const Matrix v = RandomMatrix(rows, cols, gen);
    const Matrix h = RandomMatrix(k, cols, gen);
    const Matrix r = RandomMatrix(rows, cols, gen, -0.3, 0.3);
    const GradientStatistics stats = ComputeStatistics(
        DataMatrix(v), Coefficients(h), Outliers(r, 1.0));
    const Matrix w = RandomUnitBallColumns(rows, k, gen);

    const Matrix analytic = DictionaryGradient(Dictionary(w), stats);

    const auto potential = [&](const Matrix& point) {
      return 0.5 * (point.transpose() * point * stats.coeff_gram).trace() -
             (point.transpose() * stats.data_cross).trace();
    };
    Matrix numeric(rows, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        numeric(i, j) = CentralDifference(potential, w, i, j, 1e-6);
      }
    }
    ASSERT_LT((analytic - numeric).norm() / std::max(analytic.norm(), 1e-12),
              1e-5);
  }
}

TEST(DictionaryStep, FixedPointAtZeroGradient) {
  std::mt19937_64 gen(40);
  const Dictionary w(RandomUnitBallColumns(4, 2, gen));
  const Dictionary next = DictionaryStep(w, Matrix::Zero(4, 2), 0.1);
  EXPECT_TRUE(BitEqual(next.values(), w.values()));
}

TEST(DictionaryStep, ProjectsOntoFeasibleSet) {
  const Dictionary w(Matrix::Zero(2, 1));
  Matrix grad(2, 1);
  grad << -3.0, -4.0;
  const Dictionary next = DictionaryStep(w, grad, 1.0);
  EXPECT_EQ(next.values()(0, 0), 0.6);
  EXPECT_EQ(next.values()(1, 0), 0.8);

  Matrix up(2, 1);
  up << 1.0, 1.0;
  const Dictionary zeroed = DictionaryStep(Dictionary(Matrix::Zero(2, 1) +
                                                      Matrix::Constant(2, 1,
                                                                       0.1)),
                                           up, 1.0);
  EXPECT_TRUE(BitEqual(zeroed.values(), Matrix::Zero(2, 1)));
}

// Step sizes below the inverse curvature of each block subproblem, used where
// a test asserts monotone descent.
struct SafeSteps {
  double coeff;
  double dict;
};

SafeSteps EstimateSafeSteps(const SynthInstance& instance) {
  const double n = static_cast<double>(instance.data.cols());
  const double k = static_cast<double>(instance.dictionary.cols());
  // Dictionary columns stay in the unit ball, so the coefficient subproblem
  // curvature is at most k/n at every iterate. The dictionary subproblem
  // curvature follows the coefficient Gram; bound it from the initializer's
  // and the planted coefficients, with headroom for growth along the run.
  const InitFactors init = NndsvdInit(instance.data, static_cast<int>(k));
  const Matrix init_gram = init.coefficients.values() *
                           init.coefficients.values().transpose() / n;
  const Matrix planted_gram = instance.coefficients.values() *
                              instance.coefficients.values().transpose() / n;
  const double gram_norm =
      std::max(init_gram.operatorNorm(), planted_gram.operatorNorm());
  return {0.9 * n / k, 0.45 / std::max(gram_norm, 1e-6)};
}

TEST(Fit, ConvergesOnExactLowRankInstance) {
  const SynthInstance instance = SynthLowRank(20, 50, 3, 4242);
  const SafeSteps steps = EstimateSafeSteps(instance);

  Hyperparams params;
  params.latent_dim = 3;
  params.outlier_penalty = 3.0;  // larger than any residual entry: R stays 0
  params.coeff_step = steps.coeff;
  params.dict_step = steps.dict;
  params.max_iters = 500;
  params.rel_tol = 0.0;

  const FitResult result = Fit(instance.data, params, &instance.data);
  ASSERT_FALSE(result.trajectory.empty());
  for (std::size_t i = 1; i < result.trajectory.size(); ++i) {
    ASSERT_LE(result.trajectory[i].loss,
              result.trajectory[i - 1].loss + 1e-9)
        << "loss increased at iteration " << result.trajectory[i].iteration;
  }
  ASSERT_TRUE(result.trajectory.back().objective.has_value());
  EXPECT_LT(*result.trajectory.back().objective, 1e-3);
  EXPECT_TRUE(BitEqual(result.outliers.values(), Matrix::Zero(20, 50)));

  // Constraint sets hold exactly on the returned factors.
  EXPECT_GE(result.dictionary.values().minCoeff(), 0.0);
  for (Eigen::Index j = 0; j < result.dictionary.cols(); ++j) {
    EXPECT_LE(result.dictionary.values().col(j).norm(), 1.0 + 1e-12);
  }
  EXPECT_GE(result.coefficients.values().minCoeff(), 0.0);
}

TEST(Fit, ZeroIterationsReturnsInitialization) {
  const SynthInstance instance = SynthLowRank(8, 12, 2, 7);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 0;

  const FitResult result = Fit(instance.data, params);
  const InitFactors init = NndsvdInit(instance.data, 2);
  EXPECT_TRUE(BitEqual(result.dictionary.values(), init.dictionary.values()));
  EXPECT_TRUE(
      BitEqual(result.coefficients.values(), init.coefficients.values()));
  EXPECT_TRUE(BitEqual(result.outliers.values(), Matrix::Zero(8, 12)));
  EXPECT_TRUE(result.trajectory.empty());
}

TEST(Fit, TrajectoryBookkeeping) {
  const SynthInstance instance = SynthLowRank(6, 10, 2, 99);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 12;
  params.rel_tol = 0.0;

  const FitResult with_clean = Fit(instance.data, params, &instance.data);
  ASSERT_EQ(with_clean.trajectory.size(), 12u);
  for (std::size_t i = 0; i < with_clean.trajectory.size(); ++i) {
    ASSERT_EQ(with_clean.trajectory[i].iteration, static_cast<int>(i) + 1);
    ASSERT_TRUE(with_clean.trajectory[i].objective.has_value());
    ASSERT_FALSE(with_clean.trajectory[i].epsilon_overall.has_value());
  }

  const FitResult without_clean = Fit(instance.data, params);
  ASSERT_EQ(without_clean.trajectory.size(), 12u);
  EXPECT_FALSE(without_clean.trajectory.front().objective.has_value());
}

TEST(Fit, LargePenaltyMatchesOutlierFreeRun) {
  const SynthInstance instance = SynthLowRank(10, 20, 2, 55);
  Hyperparams with_outliers;
  with_outliers.latent_dim = 2;
  with_outliers.outlier_penalty = 10.0;  // exceeds any residual magnitude
  with_outliers.max_iters = 30;
  with_outliers.rel_tol = 0.0;

  Hyperparams frozen = with_outliers;
  frozen.model_outliers = false;

  const FitResult a = Fit(instance.data, with_outliers);
  const FitResult b = Fit(instance.data, frozen);
  EXPECT_TRUE(BitEqual(a.dictionary.values(), b.dictionary.values()));
  EXPECT_TRUE(BitEqual(a.coefficients.values(), b.coefficients.values()));
  EXPECT_TRUE(BitEqual(a.outliers.values(), Matrix::Zero(10, 20)));
  EXPECT_TRUE(BitEqual(b.outliers.values(), Matrix::Zero(10, 20)));
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    ASSERT_EQ(a.trajectory[i].loss, b.trajectory[i].loss);
  }
}

TEST(Fit, EarlyStopOnRelativeTolerance) {
  const SynthInstance instance = SynthLowRank(8, 14, 2, 13);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 100;
  params.rel_tol = 1.0;

  const FitResult result = Fit(instance.data, params);
  EXPECT_LT(result.trajectory.size(), 100u);
}

TEST(Fit, RejectsInvalidLatentDim) {
  const DataMatrix data(Matrix::Ones(3, 4));
  Hyperparams params;
  params.latent_dim = 5;
  EXPECT_THROW(Fit(data, params), DataError);
}

}  // namespace
}  // namespace dpnmf
