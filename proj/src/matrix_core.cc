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

#include "dpnmf/matrix_core.h"

#include <cmath>
#include <string>

namespace dpnmf {

namespace {

void CheckFinite(const Matrix& values, const char* what) {
  if (!values.allFinite()) {
    throw DataError(std::string(what) + " contains non-finite entries");
  }
}

void CheckNonNegative(const Matrix& values, const char* what) {
  if ((values.array() < 0.0).any()) {
    throw DataError(std::string(what) + " contains negative entries");
  }
}

void CheckNonEmpty(const Matrix& values, const char* what) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw DataError(std::string(what) + " must have at least one row and one column");
  }
}

}  // namespace

Matrix ProjectNonneg(const Matrix& x) { return x.cwiseMax(0.0); }

void ClipColumnsToUnitBall(Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double norm = x.col(j).norm();
    // Dividing by the norm can land a hair above 1 in floating point, so
    // repeat until the stored column actually satisfies the constraint.
    while (norm > 1.0) {
      x.col(j) /= norm;
      norm = x.col(j).norm();
    }
  }
}

Matrix ProjectUnitBallColumns(const Matrix& x) {
  Matrix projected = x.cwiseMax(0.0);
  ClipColumnsToUnitBall(projected);
  return projected;
}

double SoftThresholdScalar(double x, double threshold, double bound) {
  const double magnitude = std::abs(x);
  if (magnitude < threshold) return 0.0;
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (magnitude <= threshold + bound) return x - sign * threshold;
  return sign * bound;
}

Matrix SoftThreshold(const Matrix& x, double threshold, double bound) {
  if (threshold < 0.0 || bound < 0.0) {
    throw DataError("soft threshold requires threshold >= 0 and bound >= 0");
  }
  return x.unaryExpr(
      [threshold, bound](double v) { return SoftThresholdScalar(v, threshold, bound); });
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  CheckNonEmpty(values_, "data matrix");
  CheckFinite(values_, "data matrix");
  CheckNonNegative(values_, "data matrix");
}

Dictionary::Dictionary(Matrix values) : values_(std::move(values)) {
  CheckNonEmpty(values_, "dictionary");
  CheckFinite(values_, "dictionary");
  CheckNonNegative(values_, "dictionary");
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    if (values_.col(j).norm() > 1.0 + kFeasibilitySlack) {
      throw DataError("dictionary column " + std::to_string(j + 1) +
                      " has norm > 1");
    }
  }
}

Coefficients::Coefficients(Matrix values) : values_(std::move(values)) {
  CheckNonEmpty(values_, "coefficient matrix");
  CheckFinite(values_, "coefficient matrix");
  CheckNonNegative(values_, "coefficient matrix");
}

Outliers::Outliers(Matrix values, double bound)
    : values_(std::move(values)), bound_(bound) {
  if (!(bound_ >= 0.0)) {
    throw DataError("outlier bound must be >= 0");
  }
  CheckNonEmpty(values_, "outlier matrix");
  CheckFinite(values_, "outlier matrix");
  if ((values_.array().abs() > bound_ + kFeasibilitySlack).any()) {
    throw DataError("outlier matrix has entries exceeding the bound " +
                    std::to_string(bound_));
  }
}

void Hyperparams::Validate() const {
  if (latent_dim < 1) throw DataError("latent_dim must be >= 1");
  if (!(outlier_penalty >= 0.0)) throw DataError("outlier_penalty must be >= 0");
  if (!(outlier_bound >= 0.0)) throw DataError("outlier_bound must be >= 0");
  if (!(coeff_step > 0.0)) throw DataError("coeff_step must be > 0");
  if (dict_step.has_value() && !(*dict_step > 0.0)) {
    throw DataError("dict_step must be > 0");
  }
  if (max_iters < 0) throw DataError("max_iters must be >= 0");
  if (inner_iters < 1) throw DataError("inner_iters must be >= 1");
  if (!(rel_tol >= 0.0)) throw DataError("rel_tol must be >= 0");
}

double Hyperparams::ResolvedDictStep(bool privacy_mode) const {
  if (dict_step.has_value()) return *dict_step;
  return privacy_mode ? coeff_step / 10000.0 : coeff_step;
}

double Loss(const DataMatrix& data, const Dictionary& dict,
            const Coefficients& coeffs, const Outliers& outliers,
            double penalty) {
  if (dict.rows() != data.rows() || dict.cols() != coeffs.rows() ||
      coeffs.cols() != data.cols() || outliers.rows() != data.rows() ||
      outliers.cols() != data.cols()) {
    throw DataError("loss: factor shapes are inconsistent with the data");
  }
  if (!(penalty >= 0.0)) throw DataError("loss: penalty must be >= 0");
  const Matrix residual =
      data.values() - dict.values() * coeffs.values() - outliers.values();
  const double quadratic = 0.5 * residual.squaredNorm();
  const double l1 = penalty * outliers.values().lpNorm<1>();
  return (quadratic + l1) / static_cast<double>(data.cols());
}

}  // namespace dpnmf
