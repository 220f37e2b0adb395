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

#include "dpnmf/rng.h"

#include "dpnmf/error.h"

namespace dpnmf {

namespace {

// SplitMix64 finalizer. Bijective, so distinct inputs give distinct seeds.
std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 NoiseRng::Stream(std::uint64_t iteration,
                                 std::uint64_t tag) const {
  const std::uint64_t key = Mix(seed_ ^ Mix(iteration ^ Mix(tag)));
  return std::mt19937_64(key);
}

Matrix GaussianMatrix(Eigen::Index rows, Eigen::Index cols, double stddev,
                      std::mt19937_64& gen) {
  if (!(stddev >= 0.0)) {
    throw DataError("gaussian noise stddev must be >= 0");
  }
  Matrix out = Matrix::Zero(rows, cols);
  if (stddev == 0.0) return out;
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, j) = normal(gen);
    }
  }
  return out;
}

}  // namespace dpnmf
