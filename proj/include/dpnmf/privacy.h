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

#ifndef DPNMF_PRIVACY_H_
#define DPNMF_PRIVACY_H_

#include <cstdint>
#include <vector>

#include "dpnmf/accountant.h"
#include "dpnmf/matrix_core.h"
#include "dpnmf/rng.h"
#include "dpnmf/solver.h"

namespace dpnmf {

// The private fit splits each iteration across a trust boundary. The curator
// holds the data, coefficients, and outliers; the analyst holds only the
// dictionary. The only values that cross the boundary are the two
// noise-perturbed sufficient statistics, so the dictionary update never sees
// the data itself.

struct PrivacyParams {
  // Per-iteration privacy budget: a single value applies to every iteration,
  // otherwise one value per iteration. +infinity means no noise (and an
  // unbounded total spend).
  std::vector<double> epsilon_per_iter = {0.5};
  double delta = 1e-5;
  std::uint64_t seed = 0;

  void Validate() const;
  // Budget for a 1-based iteration index.
  double EpsilonFor(int iteration, int max_iters) const;
};

// Noise stream tags; each iteration draws the Gram and cross-statistic
// perturbations from separate substreams.
inline constexpr std::uint64_t kGramNoiseTag = 1;
inline constexpr std::uint64_t kCrossNoiseTag = 2;

// Worst-case L2 change of the averaged coefficient Gram statistic when one
// sample is replaced, given coefficient columns in the unit ball: 2/samples.
double CoeffGramSensitivity(Eigen::Index samples);

// Same for the averaged cross statistic, given data, coefficient, and (when
// modeled) outlier columns in the unit ball: 4/samples with outliers,
// 2/samples without.
double DataCrossSensitivity(Eigen::Index samples, bool model_outliers);

// Gaussian mechanism calibration:
//   stddev = (sensitivity / epsilon) * sqrt(2 * ln(1.25 / delta))
// Valid for epsilon < 1; larger budgets trigger a one-time warning on stderr.
// A zero sensitivity or infinite epsilon yields zero noise.
double GaussianNoiseStddev(double l2_sensitivity, double epsilon,
                           double delta);

struct NoisyStatistics {
  Matrix coeff_gram;
  Matrix data_cross;
  double gram_noise_stddev = 0.0;
  double cross_noise_stddev = 0.0;
};

// Adds independent Gaussian noise to both statistics, drawing from the
// iteration's substreams. A zero stddev leaves the corresponding statistic
// bit-identical and consumes no randomness.
NoisyStatistics PerturbStatistics(const GradientStatistics& stats,
                                  double gram_noise_stddev,
                                  double cross_noise_stddev,
                                  const NoiseRng& rng, int iteration);

// Curator side of one iteration: advances the coefficients (and outliers when
// modeled) in privacy mode against the fixed dictionary, then returns the
// perturbed statistics. Mutates coeffs/outliers in place.
NoisyStatistics CuratorIteration(const DataMatrix& data,
                                 const Dictionary& dict, Coefficients& coeffs,
                                 Outliers& outliers, const Hyperparams& params,
                                 const PrivacyParams& privacy,
                                 const NoiseRng& rng, int iteration);

// Analyst side of one iteration. The inputs named here are everything the
// dictionary update depends on.
Dictionary AnalystDictionaryStep(const Dictionary& dict,
                                 const Matrix& noisy_coeff_gram,
                                 const Matrix& noisy_data_cross, double step);

// Throws unless every data column lies in the unit ball (the precondition for
// the sensitivity bounds above). Points the caller at unit-l2-clip column
// normalization.
void CheckPrivacyFeasible(const DataMatrix& data);

struct DpFitResult {
  Dictionary dictionary;  // the only factor that leaves the curator
  Trajectory trajectory;
  PrivacySpend spend;
};

// Private alternating solve. Follows the same iteration structure as Fit but
// clips coefficient and outlier columns into the unit ball, perturbs the
// sufficient statistics before the dictionary update, and accounts the total
// privacy spend across all 2 * max_iters Gaussian releases. Always runs for
// exactly max_iters iterations; rel_tol is ignored. An infinite per-iteration
// budget produces an infinite reported spend.
DpFitResult FitDp(const DataMatrix& data, const Hyperparams& params,
                  const PrivacyParams& privacy,
                  const DataMatrix* clean = nullptr);

}  // namespace dpnmf

#endif  // DPNMF_PRIVACY_H_
