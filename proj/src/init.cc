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

#include "dpnmf/init.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/SVD>

#include "dpnmf/error.h"

namespace dpnmf {

InitFactors NndsvdInit(const DataMatrix& data, int latent_dim) {
  const Eigen::Index rows = data.rows();
  const Eigen::Index cols = data.cols();
  const Eigen::Index max_dim = std::min(rows, cols);
  if (latent_dim < 1 || latent_dim > max_dim) {
    throw DataError("latent_dim must be in [1, " + std::to_string(max_dim) +
                    "] for a " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " data matrix");
  }

  Eigen::BDCSVD<Matrix> svd(data.values(),
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("SVD of the data matrix did not converge");
  }
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  const Eigen::VectorXd& sigma = svd.singularValues();

  Matrix dict = Matrix::Zero(rows, latent_dim);
  Matrix coeffs = Matrix::Zero(latent_dim, cols);

  // Leading component: the dominant singular vectors of a non-negative matrix
  // have a constant sign, so their magnitudes reproduce sigma_1 * u_1 * v_1'.
  const double lead = std::sqrt(sigma(0));
  dict.col(0) = lead * u.col(0).cwiseAbs();
  coeffs.row(0) = lead * v.col(0).cwiseAbs().transpose();

  for (int j = 1; j < latent_dim; ++j) {
    const Eigen::VectorXd u_pos = u.col(j).cwiseMax(0.0);
    const Eigen::VectorXd u_neg = (-u.col(j)).cwiseMax(0.0);
    const Eigen::VectorXd v_pos = v.col(j).cwiseMax(0.0);
    const Eigen::VectorXd v_neg = (-v.col(j)).cwiseMax(0.0);
    const double pos_product = u_pos.norm() * v_pos.norm();
    const double neg_product = u_neg.norm() * v_neg.norm();
    if (pos_product >= neg_product) {
      if (pos_product > 0.0) {
        const double scale = std::sqrt(sigma(j) * pos_product);
        dict.col(j) = (scale / u_pos.norm()) * u_pos;
        coeffs.row(j) = (scale / v_pos.norm()) * v_pos.transpose();
      }
      // Both sections empty: leave the zero columns in place.
    } else {
      const double scale = std::sqrt(sigma(j) * neg_product);
      dict.col(j) = (scale / u_neg.norm()) * u_neg;
      coeffs.row(j) = (scale / v_neg.norm()) * v_neg.transpose();
    }
  }

  // Fold the unit-ball projection of each dictionary column into the matching
  // coefficient row so dict * coeffs is preserved.
  for (int j = 0; j < latent_dim; ++j) {
    double norm = dict.col(j).norm();
    while (norm > 1.0) {
      dict.col(j) /= norm;
      coeffs.row(j) *= norm;
      norm = dict.col(j).norm();
    }
  }

  return InitFactors{Dictionary(std::move(dict)),
                     Coefficients(std::move(coeffs))};
}

Outliers ZeroOutliers(Eigen::Index rows, Eigen::Index cols, double bound) {
  return Outliers(Matrix::Zero(rows, cols), bound);
}

}  // namespace dpnmf
