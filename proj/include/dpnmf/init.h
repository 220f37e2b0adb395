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

#ifndef DPNMF_INIT_H_
#define DPNMF_INIT_H_

#include "dpnmf/matrix_core.h"

namespace dpnmf {

struct InitFactors {
  Dictionary dictionary;
  Coefficients coefficients;
};

// Deterministic SVD-based initialization (NNDSVD). The leading factor pair is
// built from the magnitudes of the dominant singular vectors; every later
// component keeps whichever sign-section pair (positive or negative parts of
// the singular vectors) has the larger norm product, preferring the positive
// pair on ties. Components whose chosen section vanishes are left as zero
// columns. Dictionary columns are then brought into the unit ball with the
// removed scale folded into the matching coefficient rows, so the implied
// product is unchanged.
//
// Requires 1 <= latent_dim <= min(rows, cols).
InitFactors NndsvdInit(const DataMatrix& data, int latent_dim);

// All-zero outlier matrix of the given shape.
Outliers ZeroOutliers(Eigen::Index rows, Eigen::Index cols, double bound);

}  // namespace dpnmf

#endif  // DPNMF_INIT_H_
