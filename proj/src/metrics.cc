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

#include "dpnmf/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dpnmf/error.h"

namespace dpnmf {

double ObjectiveValue(const DataMatrix& clean, const Dictionary& dict,
                      const Coefficients& coeffs) {
  if (dict.rows() != clean.rows() || dict.cols() != coeffs.rows() ||
      coeffs.cols() != clean.cols()) {
    throw DataError("objective: factor shapes are inconsistent with the data");
  }
  const Matrix residual = clean.values() - dict.values() * coeffs.values();
  return 0.5 * residual.squaredNorm() / static_cast<double>(clean.cols());
}

double MaskedRmse(const Matrix& values, const Matrix& predicted,
                  const BoolMask& mask) {
  if (predicted.rows() != values.rows() || predicted.cols() != values.cols() ||
      mask.rows() != values.rows() || mask.cols() != values.cols()) {
    throw DataError("masked RMSE: shape mismatch");
  }
  const Eigen::Index selected = mask.count();
  if (selected == 0) {
    throw DataError("masked RMSE: mask selects no entries");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      if (!mask(i, j)) continue;
      const double diff = values(i, j) - predicted(i, j);
      sum += diff * diff;
    }
  }
  return std::sqrt(sum / static_cast<double>(selected));
}

std::vector<std::vector<std::string>> TopTerms(const Dictionary& dict,
                                               const Vocabulary& vocab,
                                               int count) {
  if (static_cast<Eigen::Index>(vocab.size()) != dict.rows()) {
    throw DataError("vocabulary size differs from the dictionary row count");
  }
  if (count < 1 || count > dict.rows()) {
    throw DataError("top-term count must be in [1, rows]");
  }
  std::vector<std::vector<std::string>> topics;
  topics.reserve(static_cast<std::size_t>(dict.cols()));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dict.rows()));
  for (Eigen::Index j = 0; j < dict.cols(); ++j) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& column = dict.values().col(j);
    // Descending weight; equal weights keep the smaller vocabulary index.
    std::partial_sort(order.begin(), order.begin() + count, order.end(),
                      [&column](Eigen::Index a, Eigen::Index b) {
                        if (column(a) != column(b)) {
                          return column(a) > column(b);
                        }
                        return a < b;
                      });
    std::vector<std::string> terms;
    terms.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      terms.push_back(vocab.terms()[static_cast<std::size_t>(order[i])]);
    }
    topics.push_back(std::move(terms));
  }
  return topics;
}

}  // namespace dpnmf
