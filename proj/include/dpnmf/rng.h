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

#ifndef DPNMF_RNG_H_
#define DPNMF_RNG_H_

#include <cstdint>
#include <random>

#include "dpnmf/matrix_core.h"

namespace dpnmf {

// Derives independent generator substreams from a master seed. Each
// (iteration, tag) pair maps to its own generator, so the draws consumed by
// one consumer never shift those of another and runs with the same seed are
// reproducible regardless of evaluation order.
class NoiseRng {
 public:
  explicit NoiseRng(std::uint64_t seed) : seed_(seed) {}

  std::mt19937_64 Stream(std::uint64_t iteration, std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// rows x cols matrix of independent N(0, stddev^2) draws, filled column by
// column. stddev == 0 returns the zero matrix without consuming any draws.
Matrix GaussianMatrix(Eigen::Index rows, Eigen::Index cols, double stddev,
                      std::mt19937_64& gen);

}  // namespace dpnmf

#endif  // DPNMF_RNG_H_
