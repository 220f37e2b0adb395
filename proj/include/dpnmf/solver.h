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

#ifndef DPNMF_SOLVER_H_
#define DPNMF_SOLVER_H_

#include <optional>
#include <vector>

#include "dpnmf/matrix_core.h"

namespace dpnmf {

// Per-sample sufficient statistics for the dictionary update:
//   coeff_gram = H * H' / cols(V)          (latent_dim x latent_dim)
//   data_cross = (V - R) * H' / cols(V)    (rows(V) x latent_dim)
// The dictionary gradient is dict * coeff_gram - data_cross; nothing else
// about the data is needed to update the dictionary.
struct GradientStatistics {
  Matrix coeff_gram;
  Matrix data_cross;
};

struct TrajectoryPoint {
  int iteration = 0;  // 1-based
  double loss = 0.0;
  // Present when a clean reference matrix is supplied to the fit.
  std::optional<double> objective;
  // Present for private fits: total privacy spend after this iteration.
  std::optional<double> epsilon_overall;
};

using Trajectory = std::vector<TrajectoryPoint>;

// Gradient of the quadratic loss in the coefficients, averaged per sample:
//   (W'*W*H - W'*(V - R)) / cols(V)
Matrix CoefficientGradient(const DataMatrix& data, const Dictionary& dict,
                           const Coefficients& coeffs,
                           const Outliers& outliers);

// Projected gradient step on the coefficients. privacy mode additionally
// clips coefficient columns into the unit ball, matching the feasible set
// the private sensitivity bounds assume.
Coefficients CoefficientStep(const Coefficients& coeffs,
                             const Matrix& gradient, double step,
                             bool privacy_mode);

// Exact outlier update: soft threshold of the residual V - W*H. privacy mode
// additionally clips outlier columns into the unit ball.
Outliers OutlierStep(const DataMatrix& data, const Dictionary& dict,
                     const Coefficients& coeffs, double penalty, double bound,
                     bool privacy_mode);

// Sufficient statistics for the current coefficients and outliers. The Gram
// block is accumulated symmetrically, so coeff_gram is exactly equal to its
// transpose.
GradientStatistics ComputeStatistics(const DataMatrix& data,
                                     const Coefficients& coeffs,
                                     const Outliers& outliers);

// dict * coeff_gram - data_cross.
Matrix DictionaryGradient(const Dictionary& dict,
                          const GradientStatistics& stats);

// Projected gradient step on the dictionary: entrywise max(0, .) followed by
// clipping each column into the unit ball.
Dictionary DictionaryStep(const Dictionary& dict, const Matrix& gradient,
                          double step);

struct FitResult {
  Dictionary dictionary;
  Coefficients coefficients;
  Outliers outliers;
  Trajectory trajectory;
};

// Alternating solve: inner_iters coefficient/outlier passes, then one
// dictionary step, per outer iteration. Starts from NndsvdInit and a zero
// outlier matrix. Stops after max_iters iterations or when the relative loss
// change drops below rel_tol. When `clean` is non-null each trajectory point
// also records 0.5 * ||clean - W*H||_F^2 / cols(clean).
FitResult Fit(const DataMatrix& data, const Hyperparams& params,
              const DataMatrix* clean = nullptr);

}  // namespace dpnmf

#endif  // DPNMF_SOLVER_H_
