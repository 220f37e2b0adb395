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

#ifndef DPNMF_METRICS_H_
#define DPNMF_METRICS_H_

#include <string>
#include <vector>

#include "dpnmf/data_io.h"
#include "dpnmf/matrix_core.h"

namespace dpnmf {

// Reconstruction error against a clean reference, averaged per sample:
//   0.5 * ||clean - dict * coeffs||_F^2 / cols(clean)
double ObjectiveValue(const DataMatrix& clean, const Dictionary& dict,
                      const Coefficients& coeffs);

// Root mean squared error over the entries selected by the mask. Requires at
// least one selected entry.
double MaskedRmse(const Matrix& values, const Matrix& predicted,
                  const BoolMask& mask);

// For each dictionary column, the `count` terms with the largest weights,
// in descending weight order; ties broken toward the smaller vocabulary
// index. Requires vocab.size() == dict.rows() and 1 <= count <= dict.rows().
std::vector<std::vector<std::string>> TopTerms(const Dictionary& dict,
                                               const Vocabulary& vocab,
                                               int count);

}  // namespace dpnmf

#endif  // DPNMF_METRICS_H_
