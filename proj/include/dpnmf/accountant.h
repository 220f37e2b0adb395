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

#ifndef DPNMF_ACCOUNTANT_H_
#define DPNMF_ACCOUNTANT_H_

#include <vector>

namespace dpnmf {

// Renyi privacy curve of a Gaussian mechanism: epsilon(alpha) = rate * alpha
// for alpha > 1, with rate = sensitivity^2 / (2 * stddev^2). Composition of
// such mechanisms adds their rates, so a single rate describes any
// composition of Gaussian releases.
class RdpCurve {
 public:
  RdpCurve() = default;

  // rate >= 0. A zero rate is the curve of a release that reveals nothing.
  static RdpCurve FromRate(double rate);

  // Curve of one Gaussian release with the given L2 sensitivity and noise
  // stddev. Requires sensitivity >= 0 and stddev > 0.
  static RdpCurve Gaussian(double l2_sensitivity, double noise_stddev);

  double rate() const { return rate_; }

  // Renyi divergence bound at order alpha (> 1).
  double EpsilonAt(double alpha) const;

 private:
  explicit RdpCurve(double rate) : rate_(rate) {}

  double rate_ = 0.0;
};

// Composition: rates add. An empty list composes to the zero curve.
RdpCurve Compose(const std::vector<RdpCurve>& curves);

struct PrivacySpend {
  double epsilon = 0.0;
  double delta = 0.0;
  // Order minimizing the converted epsilon; meaningless when degenerate.
  double alpha_opt = 0.0;
  int iterations = 0;
  // True when the composed curve has zero rate (nothing was released), in
  // which case epsilon is exactly 0.
  bool degenerate = false;
};

// Conversion to (epsilon, delta)-DP, minimized over the order:
//   epsilon = min_{alpha > 1} rate * alpha + ln(1/delta) / (alpha - 1)
// The minimizer is alpha = 1 + sqrt(ln(1/delta) / rate). Requires
// 0 < delta < 1.
PrivacySpend RdpToDp(const RdpCurve& curve, double delta, int iterations = 0);

// Total spend of `iterations` rounds, each releasing two Gaussian statistics
// with the given sensitivities and noise levels.
PrivacySpend OverallSpend(int iterations, double gram_sensitivity,
                          double gram_noise_stddev, double cross_sensitivity,
                          double cross_noise_stddev, double delta);

}  // namespace dpnmf

#endif  // DPNMF_ACCOUNTANT_H_
