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
#include <string>
#include <utility>

#include "dpnmf/error.h"
#include "dpnmf/init.h"
#include "dpnmf/metrics.h"

namespace dpnmf {

namespace {

void CheckFactorShapes(const DataMatrix& data, const Dictionary& dict,
                       const Coefficients& coeffs, const Outliers& outliers) {
  if (dict.rows() != data.rows() || dict.cols() != coeffs.rows() ||
      coeffs.cols() != data.cols() || outliers.rows() != data.rows() ||
      outliers.cols() != data.cols()) {
    throw DataError("factor shapes are inconsistent with the data");
  }
}

}  // namespace

Matrix CoefficientGradient(const DataMatrix& data, const Dictionary& dict,
                           const Coefficients& coeffs,
                           const Outliers& outliers) {
  CheckFactorShapes(data, dict, coeffs, outliers);
  const double samples = static_cast<double>(data.cols());
  const Matrix gram = dict.values().transpose() * dict.values();
  return (gram * coeffs.values() -
          dict.values().transpose() * (data.values() - outliers.values())) /
         samples;
}

Coefficients CoefficientStep(const Coefficients& coeffs,
                             const Matrix& gradient, double step,
                             bool privacy_mode) {
  if (gradient.rows() != coeffs.rows() || gradient.cols() != coeffs.cols()) {
    throw DataError("coefficient gradient shape mismatch");
  }
  Matrix updated = (coeffs.values() - step * gradient).cwiseMax(0.0);
  if (privacy_mode) ClipColumnsToUnitBall(updated);
  return Coefficients(std::move(updated));
}

Outliers OutlierStep(const DataMatrix& data, const Dictionary& dict,
                     const Coefficients& coeffs, double penalty, double bound,
                     bool privacy_mode) {
  if (dict.rows() != data.rows() || dict.cols() != coeffs.rows() ||
      coeffs.cols() != data.cols()) {
    throw DataError("factor shapes are inconsistent with the data");
  }
  const Matrix residual = data.values() - dict.values() * coeffs.values();
  Matrix updated = SoftThreshold(residual, penalty, bound);
  if (privacy_mode) ClipColumnsToUnitBall(updated);
  return Outliers(std::move(updated), bound);
}

GradientStatistics ComputeStatistics(const DataMatrix& data,
                                     const Coefficients& coeffs,
                                     const Outliers& outliers) {
  if (coeffs.cols() != data.cols() || outliers.rows() != data.rows() ||
      outliers.cols() != data.cols()) {
    throw DataError("factor shapes are inconsistent with the data");
  }
  const double samples = static_cast<double>(data.cols());
  const Eigen::Index k = coeffs.rows();
  Matrix gram = Matrix::Zero(k, k);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(coeffs.values(),
                                                  1.0 / samples);
  gram.triangularView<Eigen::StrictlyUpper>() =
      gram.triangularView<Eigen::StrictlyLower>().transpose();
  Matrix cross =
      (data.values() - outliers.values()) * coeffs.values().transpose() /
      samples;
  return GradientStatistics{std::move(gram), std::move(cross)};
}

Matrix DictionaryGradient(const Dictionary& dict,
                          const GradientStatistics& stats) {
  if (stats.coeff_gram.rows() != dict.cols() ||
      stats.coeff_gram.cols() != dict.cols() ||
      stats.data_cross.rows() != dict.rows() ||
      stats.data_cross.cols() != dict.cols()) {
    throw DataError("statistic shapes are inconsistent with the dictionary");
  }
  return dict.values() * stats.coeff_gram - stats.data_cross;
}

Dictionary DictionaryStep(const Dictionary& dict, const Matrix& gradient,
                          double step) {
  if (gradient.rows() != dict.rows() || gradient.cols() != dict.cols()) {
    throw DataError("dictionary gradient shape mismatch");
  }
  return Dictionary(
      ProjectUnitBallColumns(dict.values() - step * gradient));
}

FitResult Fit(const DataMatrix& data, const Hyperparams& params,
              const DataMatrix* clean) {
  params.Validate();
  if (clean != nullptr &&
      (clean->rows() != data.rows() || clean->cols() != data.cols())) {
    throw DataError("clean reference matrix shape differs from the data");
  }

  InitFactors init = NndsvdInit(data, params.latent_dim);
  Dictionary dict = std::move(init.dictionary);
  Coefficients coeffs = std::move(init.coefficients);
  Outliers outliers = ZeroOutliers(data.rows(), data.cols(),
                                   params.outlier_bound);

  Trajectory trajectory;
  trajectory.reserve(params.max_iters);
  const double dict_step = params.ResolvedDictStep(/*privacy_mode=*/false);
  double previous_loss =
      Loss(data, dict, coeffs, outliers, params.outlier_penalty);

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    for (int inner = 0; inner < params.inner_iters; ++inner) {
      const Matrix gradient =
          CoefficientGradient(data, dict, coeffs, outliers);
      coeffs = CoefficientStep(coeffs, gradient, params.coeff_step,
                               /*privacy_mode=*/false);
      if (params.model_outliers) {
        outliers = OutlierStep(data, dict, coeffs, params.outlier_penalty,
                               params.outlier_bound, /*privacy_mode=*/false);
      }
    }

    const GradientStatistics stats = ComputeStatistics(data, coeffs, outliers);
    const Matrix dict_gradient = DictionaryGradient(dict, stats);
    dict = DictionaryStep(dict, dict_gradient, dict_step);

    const double loss =
        Loss(data, dict, coeffs, outliers, params.outlier_penalty);
    if (!std::isfinite(loss)) {
      throw NumericError("loss became non-finite at iteration " +
                         std::to_string(iter));
    }

    TrajectoryPoint point;
    point.iteration = iter;
    point.loss = loss;
    if (clean != nullptr) {
      point.objective = ObjectiveValue(*clean, dict, coeffs);
    }
    trajectory.push_back(point);

    const double change =
        std::abs(loss - previous_loss) / std::max(std::abs(previous_loss), 1e-12);
    previous_loss = loss;
    if (change < params.rel_tol) break;
  }

  return FitResult{std::move(dict), std::move(coeffs), std::move(outliers),
                   std::move(trajectory)};
}

}  // namespace dpnmf
