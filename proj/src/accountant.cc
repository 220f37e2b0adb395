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

#include "dpnmf/accountant.h"

#include <cmath>
#include <limits>

#include "dpnmf/error.h"

namespace dpnmf {

RdpCurve RdpCurve::FromRate(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DataError("RDP rate must be finite and >= 0");
  }
  return RdpCurve(rate);
}

RdpCurve RdpCurve::Gaussian(double l2_sensitivity, double noise_stddev) {
  if (!(l2_sensitivity >= 0.0)) {
    throw DataError("sensitivity must be >= 0");
  }
  if (!(noise_stddev > 0.0)) {
    throw DataError("noise stddev must be > 0 for a Gaussian privacy curve");
  }
  const double ratio = l2_sensitivity / noise_stddev;
  return RdpCurve(0.5 * ratio * ratio);
}

double RdpCurve::EpsilonAt(double alpha) const {
  if (!(alpha > 1.0)) {
    throw DataError("Renyi order must be > 1");
  }
  return rate_ * alpha;
}

RdpCurve Compose(const std::vector<RdpCurve>& curves) {
  double total = 0.0;
  for (const RdpCurve& curve : curves) total += curve.rate();
  return RdpCurve::FromRate(total);
}

PrivacySpend RdpToDp(const RdpCurve& curve, double delta, int iterations) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DataError("delta must lie in (0, 1)");
  }
  PrivacySpend spend;
  spend.delta = delta;
  spend.iterations = iterations;
  const double rate = curve.rate();
  if (rate == 0.0) {
    // Nothing was released; epsilon is 0 and no finite order optimizes it.
    spend.degenerate = true;
    spend.alpha_opt = std::numeric_limits<double>::infinity();
    return spend;
  }
  const double log_term = std::log(1.0 / delta);
  // d/dalpha [rate*alpha + L/(alpha-1)] = 0 at alpha = 1 + sqrt(L/rate).
  spend.alpha_opt = 1.0 + std::sqrt(log_term / rate);
  spend.epsilon =
      curve.EpsilonAt(spend.alpha_opt) + log_term / (spend.alpha_opt - 1.0);
  return spend;
}

PrivacySpend OverallSpend(int iterations, double gram_sensitivity,
                          double gram_noise_stddev, double cross_sensitivity,
                          double cross_noise_stddev, double delta) {
  if (iterations < 0) {
    throw DataError("iterations must be >= 0");
  }
  std::vector<RdpCurve> per_release;
  per_release.reserve(2 * static_cast<std::size_t>(iterations));
  for (int t = 0; t < iterations; ++t) {
    per_release.push_back(
        RdpCurve::Gaussian(gram_sensitivity, gram_noise_stddev));
    per_release.push_back(
        RdpCurve::Gaussian(cross_sensitivity, cross_noise_stddev));
  }
  return RdpToDp(Compose(per_release), delta, iterations);
}

}  // namespace dpnmf
