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

#ifndef DPNMF_DATA_IO_H_
#define DPNMF_DATA_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dpnmf/matrix_core.h"

namespace dpnmf {

// Dense CSV: one matrix row per line, comma-separated decimal values, no
// header. Parse errors name the offending 1-based row and column.
DataMatrix LoadDenseCsv(const std::string& path);

// Writes values with 17 significant digits so a load/save round trip is
// bit-exact.
void SaveDenseCsv(const std::string& path, const Matrix& values);

// Coordinate (sparse) text format: '%'-prefixed comment lines, then a header
// line "rows cols nnz", then nnz whitespace-separated "i j value" triples
// with 1-based indices. Unlisted entries are zero. Duplicate coordinates,
// out-of-range indices, negative values, and a triple count different from
// nnz are errors.
DataMatrix LoadCoordinate(const std::string& path);

// Boolean masks ride in the same dense CSV layout with 0/1 entries.
void SaveMaskCsv(const std::string& path, const BoolMask& mask);
BoolMask LoadMaskCsv(const std::string& path);

enum class ColumnNormalization {
  kNone,
  kUnitMax,     // each nonzero column divided by its maximum entry
  kUnitL2Clip,  // each column with norm > 1 rescaled onto the unit sphere
};

// Accepts "none", "unit-max", "unit-l2-clip".
ColumnNormalization ParseNormalization(const std::string& name);

DataMatrix NormalizeColumns(const DataMatrix& data, ColumnNormalization mode);

struct Contaminated {
  DataMatrix data;
  BoolMask mask;  // true where an entry was perturbed
};

// Perturbs floor(column_fraction * cols) uniformly chosen columns; within
// each, floor(entry_fraction * rows) uniformly chosen entries receive
// independent Uniform[-1, 1] additive noise and are clamped at zero.
// Identical seeds reproduce identical output.
Contaminated Contaminate(const DataMatrix& data, double column_fraction,
                         double entry_fraction, std::uint64_t seed);

// Term list, one term per line; line i names matrix row i. Terms must be
// unique and non-empty.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> terms);

  static Vocabulary Load(const std::string& path);

  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<std::string> terms_;
};

// Term-document count matrix (terms x documents) with non-negative integral
// entries.
class CorpusCounts {
 public:
  explicit CorpusCounts(Matrix counts);

  const Matrix& counts() const { return counts_; }
  Eigen::Index terms() const { return counts_.rows(); }
  Eigen::Index documents() const { return counts_.cols(); }
  // Number of documents containing each term.
  const std::vector<Eigen::Index>& document_frequency() const {
    return document_frequency_;
  }

 private:
  Matrix counts_;
  std::vector<Eigen::Index> document_frequency_;
};

// weight(term, doc) = count(term, doc) * ln(documents / df(term)), natural
// log; rows for unseen terms are zero.
DataMatrix TfIdf(const CorpusCounts& counts);

struct SynthInstance {
  DataMatrix data;
  Dictionary dictionary;
  Coefficients coefficients;
};

// Random exactly-low-rank instance: data = dictionary * coefficients with
// non-negative factors, dictionary columns in the unit ball, and data columns
// scaled into the unit ball. Deterministic in the seed.
SynthInstance SynthLowRank(Eigen::Index rows, Eigen::Index cols,
                           int latent_dim, std::uint64_t seed);

}  // namespace dpnmf

#endif  // DPNMF_DATA_IO_H_
