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

#ifndef DPNMF_MATRIX_CORE_H_
#define DPNMF_MATRIX_CORE_H_

#include <optional>

#include <Eigen/Dense>

#include "dpnmf/error.h"

namespace dpnmf {

using Matrix = Eigen::MatrixXd;
using BoolMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Slack used when validating feasibility of externally supplied factors
// (column norms, outlier magnitudes). Values produced by the projection
// operators below satisfy their constraints without slack.
inline constexpr double kFeasibilitySlack = 1e-12;

// Entrywise max(x, 0).
Matrix ProjectNonneg(const Matrix& x);

// Rescales every column with Euclidean norm > 1 onto the unit sphere, in
// place. Columns already inside the ball are left untouched (bit-identical).
// The result always has floating-point column norms <= 1, so the operation
// is exactly idempotent.
void ClipColumnsToUnitBall(Matrix& x);

// Projection onto {x : x >= 0, column norms <= 1}: entrywise max(x, 0)
// followed by ClipColumnsToUnitBall.
Matrix ProjectUnitBallColumns(const Matrix& x);

// Scalar soft threshold with a box constraint:
//   |x| <  threshold          -> 0
//   |x| <= threshold + bound  -> x shrunk toward zero by threshold
//   otherwise                 -> sign(x) * bound
// This is the closed-form minimizer of 0.5*(x - s)^2 + threshold*|s| over
// s in [-bound, bound].
double SoftThresholdScalar(double x, double threshold, double bound);

// Entrywise SoftThresholdScalar.
Matrix SoftThreshold(const Matrix& x, double threshold, double bound);

// Non-negative data matrix, one sample per column. Entries must be finite.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

 private:
  Matrix values_;
};

// Dictionary (basis) matrix: non-negative with column norms <= 1.
class Dictionary {
 public:
  explicit Dictionary(Matrix values);

  const Matrix& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  int latent_dim() const { return static_cast<int>(values_.cols()); }

 private:
  Matrix values_;
};

// Coefficient matrix: non-negative, one sample per column.
class Coefficients {
 public:
  explicit Coefficients(Matrix values);

  const Matrix& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

 private:
  Matrix values_;
};

// Outlier matrix: entries bounded by `bound` in absolute value.
class Outliers {
 public:
  Outliers(Matrix values, double bound);

  const Matrix& values() const { return values_; }
  double bound() const { return bound_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

 private:
  Matrix values_;
  double bound_;
};

// Solver configuration, shared by the non-private and private fits.
struct Hyperparams {
  int latent_dim = 2;
  double outlier_penalty = 0.1;  // L1 weight on the outlier matrix
  double outlier_bound = 1.0;    // box bound on outlier magnitudes
  double coeff_step = 0.05;      // gradient step for the coefficient update
  // Gradient step for the dictionary update. Unset resolves to coeff_step in
  // the non-private fit and coeff_step / 10000 in the private fit.
  std::optional<double> dict_step;
  int max_iters = 200;
  int inner_iters = 1;           // coefficient/outlier passes per outer iter
  double rel_tol = 1e-6;         // relative loss change stopping threshold
  bool model_outliers = true;    // when false the outlier matrix stays zero

  void Validate() const;
  double ResolvedDictStep(bool privacy_mode) const;
};

// Average per-sample loss:
//   (0.5 * ||V - W*H - R||_F^2 + penalty * ||R||_1) / cols(V)
double Loss(const DataMatrix& data, const Dictionary& dict,
            const Coefficients& coeffs, const Outliers& outliers,
            double penalty);

}  // namespace dpnmf

#endif  // DPNMF_MATRIX_CORE_H_
