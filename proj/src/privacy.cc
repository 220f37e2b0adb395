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

#include "dpnmf/privacy.h"

#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <string>
#include <utility>

#include "dpnmf/error.h"
#include "dpnmf/init.h"
#include "dpnmf/metrics.h"

namespace dpnmf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void WarnLargeEpsilonOnce(double epsilon) {
  static std::once_flag warned;
  std::call_once(warned, [epsilon] {
    std::cerr << "warning: per-release epsilon " << epsilon
              << " is >= 1; the Gaussian calibration bound only holds for "
                 "epsilon < 1\n";
  });
}

}  // namespace

void PrivacyParams::Validate() const {
  if (epsilon_per_iter.empty()) {
    throw DataError("epsilon schedule must not be empty");
  }
  for (double eps : epsilon_per_iter) {
    if (std::isnan(eps) || !(eps > 0.0)) {
      throw DataError("per-iteration epsilon must be > 0");
    }
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DataError("delta must lie in (0, 1)");
  }
}

double PrivacyParams::EpsilonFor(int iteration, int max_iters) const {
  if (epsilon_per_iter.size() != 1 &&
      epsilon_per_iter.size() != static_cast<std::size_t>(max_iters)) {
    throw DataError("epsilon schedule must hold one value or one per iteration");
  }
  if (iteration < 1 || iteration > max_iters) {
    throw DataError("iteration index out of range");
  }
  if (epsilon_per_iter.size() == 1) return epsilon_per_iter.front();
  return epsilon_per_iter[static_cast<std::size_t>(iteration - 1)];
}

double CoeffGramSensitivity(Eigen::Index samples) {
  if (samples < 1) throw DataError("sample count must be >= 1");
  return 2.0 / static_cast<double>(samples);
}

double DataCrossSensitivity(Eigen::Index samples, bool model_outliers) {
  if (samples < 1) throw DataError("sample count must be >= 1");
  return (model_outliers ? 4.0 : 2.0) / static_cast<double>(samples);
}

double GaussianNoiseStddev(double l2_sensitivity, double epsilon,
                           double delta) {
  if (!(l2_sensitivity >= 0.0)) {
    throw DataError("sensitivity must be >= 0");
  }
  if (std::isnan(epsilon) || !(epsilon > 0.0)) {
    throw DataError("epsilon must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DataError("delta must lie in (0, 1)");
  }
  if (l2_sensitivity == 0.0 || std::isinf(epsilon)) return 0.0;
  if (epsilon >= 1.0) WarnLargeEpsilonOnce(epsilon);
  return l2_sensitivity / epsilon * std::sqrt(2.0 * std::log(1.25 / delta));
}

NoisyStatistics PerturbStatistics(const GradientStatistics& stats,
                                  double gram_noise_stddev,
                                  double cross_noise_stddev,
                                  const NoiseRng& rng, int iteration) {
  if (!(gram_noise_stddev >= 0.0) || !(cross_noise_stddev >= 0.0)) {
    throw DataError("noise stddev must be >= 0");
  }
  NoisyStatistics noisy{stats.coeff_gram, stats.data_cross, gram_noise_stddev,
                        cross_noise_stddev};
  const auto iter_tag = static_cast<std::uint64_t>(iteration);
  if (gram_noise_stddev > 0.0) {
    std::mt19937_64 gen = rng.Stream(iter_tag, kGramNoiseTag);
    noisy.coeff_gram += GaussianMatrix(stats.coeff_gram.rows(),
                                       stats.coeff_gram.cols(),
                                       gram_noise_stddev, gen);
  }
  if (cross_noise_stddev > 0.0) {
    std::mt19937_64 gen = rng.Stream(iter_tag, kCrossNoiseTag);
    noisy.data_cross += GaussianMatrix(stats.data_cross.rows(),
                                       stats.data_cross.cols(),
                                       cross_noise_stddev, gen);
  }
  return noisy;
}

NoisyStatistics CuratorIteration(const DataMatrix& data,
                                 const Dictionary& dict, Coefficients& coeffs,
                                 Outliers& outliers, const Hyperparams& params,
                                 const PrivacyParams& privacy,
                                 const NoiseRng& rng, int iteration) {
  for (int inner = 0; inner < params.inner_iters; ++inner) {
    const Matrix gradient = CoefficientGradient(data, dict, coeffs, outliers);
    coeffs = CoefficientStep(coeffs, gradient, params.coeff_step,
                             /*privacy_mode=*/true);
    if (params.model_outliers) {
      outliers = OutlierStep(data, dict, coeffs, params.outlier_penalty,
                             params.outlier_bound, /*privacy_mode=*/true);
    }
  }
  const GradientStatistics stats = ComputeStatistics(data, coeffs, outliers);
  const double epsilon = privacy.EpsilonFor(iteration, params.max_iters);
  const double gram_stddev = GaussianNoiseStddev(
      CoeffGramSensitivity(data.cols()), epsilon, privacy.delta);
  const double cross_stddev = GaussianNoiseStddev(
      DataCrossSensitivity(data.cols(), params.model_outliers), epsilon,
      privacy.delta);
  return PerturbStatistics(stats, gram_stddev, cross_stddev, rng, iteration);
}

Dictionary AnalystDictionaryStep(const Dictionary& dict,
                                 const Matrix& noisy_coeff_gram,
                                 const Matrix& noisy_data_cross, double step) {
  const GradientStatistics stats{noisy_coeff_gram, noisy_data_cross};
  return DictionaryStep(dict, DictionaryGradient(dict, stats), step);
}

void CheckPrivacyFeasible(const DataMatrix& data) {
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (data.values().col(j).norm() > 1.0 + 1e-9) {
      throw DataError(
          "private fit requires data columns in the unit L2 ball; "
          "normalize columns first (unit-l2-clip)");
    }
  }
}

DpFitResult FitDp(const DataMatrix& data, const Hyperparams& params,
                  const PrivacyParams& privacy, const DataMatrix* clean) {
  params.Validate();
  privacy.Validate();
  CheckPrivacyFeasible(data);
  if (clean != nullptr &&
      (clean->rows() != data.rows() || clean->cols() != data.cols())) {
    throw DataError("clean reference matrix shape differs from the data");
  }
  // Fail on a malformed schedule before running any iteration.
  if (params.max_iters > 0) {
    (void)privacy.EpsilonFor(1, params.max_iters);
  }

  InitFactors init = NndsvdInit(data, params.latent_dim);
  Dictionary dict = std::move(init.dictionary);
  Coefficients coeffs = std::move(init.coefficients);
  Outliers outliers =
      ZeroOutliers(data.rows(), data.cols(), params.outlier_bound);

  const NoiseRng rng(privacy.seed);
  const double dict_step = params.ResolvedDictStep(/*privacy_mode=*/true);
  const double gram_sensitivity = CoeffGramSensitivity(data.cols());
  const double cross_sensitivity =
      DataCrossSensitivity(data.cols(), params.model_outliers);

  Trajectory trajectory;
  trajectory.reserve(params.max_iters);
  double composed_rate = 0.0;
  bool unbounded_spend = false;

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    const NoisyStatistics noisy = CuratorIteration(
        data, dict, coeffs, outliers, params, privacy, rng, iter);
    dict = AnalystDictionaryStep(dict, noisy.coeff_gram, noisy.data_cross,
                                 dict_step);

    if (noisy.gram_noise_stddev > 0.0 && noisy.cross_noise_stddev > 0.0) {
      composed_rate +=
          RdpCurve::Gaussian(gram_sensitivity, noisy.gram_noise_stddev).rate() +
          RdpCurve::Gaussian(cross_sensitivity, noisy.cross_noise_stddev)
              .rate();
    } else {
      // Zero noise on a statistic with positive sensitivity: no finite
      // guarantee exists for this run.
      unbounded_spend = true;
    }

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
    point.epsilon_overall =
        unbounded_spend
            ? kInf
            : RdpToDp(RdpCurve::FromRate(composed_rate), privacy.delta, iter)
                  .epsilon;
    trajectory.push_back(point);
  }

  PrivacySpend spend;
  if (unbounded_spend) {
    spend.epsilon = kInf;
    spend.delta = privacy.delta;
    spend.alpha_opt = kInf;
    spend.iterations = params.max_iters;
  } else {
    spend = RdpToDp(RdpCurve::FromRate(composed_rate), privacy.delta,
                    params.max_iters);
  }
  return DpFitResult{std::move(dict), std::move(trajectory), spend};
}

}  // namespace dpnmf
