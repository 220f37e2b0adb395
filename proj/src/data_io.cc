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

#include "dpnmf/data_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "dpnmf/error.h"

namespace dpnmf {

namespace {

std::string Trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

double ParseValue(const std::string& token, Eigen::Index row,
                  Eigen::Index col) {
  const std::string trimmed = Trim(token);
  const char* begin = trimmed.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw DataError("non-numeric value at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1) + ": '" + token +
                    "'");
  }
  return value;
}

// Shared dense CSV reader; entry validation is left to the caller.
std::vector<std::vector<double>> ReadCsvRows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty() && in.peek() == std::char_traits<char>::eof()) {
      break;  // tolerate a trailing newline
    }
    std::vector<double> row;
    std::stringstream fields(line);
    std::string token;
    while (std::getline(fields, token, ',')) {
      row.push_back(
          ParseValue(token, static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(row.size())));
    }
    if (line.empty() || line.back() == ',') {
      // "1,2," has a trailing empty field that the splitter drops silently.
      throw DataError("empty field at row " + std::to_string(rows.size() + 1) +
                      ", column " + std::to_string(row.size() + 1));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("ragged row " + std::to_string(rows.size() + 1) +
                      ": expected " + std::to_string(rows.front().size()) +
                      " values, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty matrix file: " + path);
  return rows;
}

Matrix RowsToMatrix(const std::vector<std::vector<double>>& rows) {
  Matrix values(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      values(i, j) = rows[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(j)];
    }
  }
  return values;
}

void FormatValue(std::string& out, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

}  // namespace

DataMatrix LoadDenseCsv(const std::string& path) {
  const auto rows = ReadCsvRows(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] < 0.0) {
        throw DataError("negative value at row " + std::to_string(i + 1) +
                        ", column " + std::to_string(j + 1));
      }
    }
  }
  return DataMatrix(RowsToMatrix(rows));
}

void SaveDenseCsv(const std::string& path, const Matrix& values) {
  std::string out;
  out.reserve(static_cast<std::size_t>(values.size()) * 24);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out += ',';
      FormatValue(out, values(i, j));
    }
    out += '\n';
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot open file for writing: " + path);
  file << out;
  if (!file) throw DataError("write failed: " + path);
}

DataMatrix LoadCoordinate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::string line;
  std::stringstream body;
  while (std::getline(in, line)) {
    const std::string trimmed = Trim(line);
    if (!trimmed.empty() && trimmed[0] == '%') continue;
    body << trimmed << '\n';
  }

  long long rows = 0;
  long long cols = 0;
  long long nnz = 0;
  if (!(body >> rows >> cols >> nnz)) {
    throw DataError("coordinate file missing the 'rows cols nnz' header");
  }
  if (rows < 1 || cols < 1 || nnz < 0) {
    throw DataError("coordinate header values out of range");
  }

  Matrix values = Matrix::Zero(static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
  BoolMask seen = BoolMask::Constant(values.rows(), values.cols(), false);
  for (long long entry = 0; entry < nnz; ++entry) {
    long long i = 0;
    long long j = 0;
    double value = 0.0;
    if (!(body >> i >> j >> value)) {
      throw DataError("coordinate file ended after " + std::to_string(entry) +
                      " of " + std::to_string(nnz) + " entries");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw DataError("coordinate (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") is outside the declared " +
                      std::to_string(rows) + "x" + std::to_string(cols) +
                      " shape");
    }
    const auto r = static_cast<Eigen::Index>(i - 1);
    const auto c = static_cast<Eigen::Index>(j - 1);
    if (seen(r, c)) {
      throw DataError("duplicate coordinate (" + std::to_string(i) + ", " +
                      std::to_string(j) + ")");
    }
    if (value < 0.0) {
      throw DataError("negative value at coordinate (" + std::to_string(i) +
                      ", " + std::to_string(j) + ")");
    }
    seen(r, c) = true;
    values(r, c) = value;
  }
  std::string leftover;
  if (body >> leftover) {
    throw DataError("coordinate file has data beyond the declared " +
                    std::to_string(nnz) + " entries");
  }
  return DataMatrix(std::move(values));
}

void SaveMaskCsv(const std::string& path, const BoolMask& mask) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mask.size()) * 2);
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
      if (j > 0) out += ',';
      out += mask(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot open file for writing: " + path);
  file << out;
  if (!file) throw DataError("write failed: " + path);
}

BoolMask LoadMaskCsv(const std::string& path) {
  const auto rows = ReadCsvRows(path);
  BoolMask mask(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
      const double value =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (value != 0.0 && value != 1.0) {
        throw DataError("mask entries must be 0 or 1 (row " +
                        std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1) + ")");
      }
      mask(i, j) = value != 0.0;
    }
  }
  return mask;
}

ColumnNormalization ParseNormalization(const std::string& name) {
  if (name == "none") return ColumnNormalization::kNone;
  if (name == "unit-max") return ColumnNormalization::kUnitMax;
  if (name == "unit-l2-clip") return ColumnNormalization::kUnitL2Clip;
  throw DataError("unknown normalization '" + name +
                  "' (expected none, unit-max, or unit-l2-clip)");
}

DataMatrix NormalizeColumns(const DataMatrix& data, ColumnNormalization mode) {
  Matrix values = data.values();
  switch (mode) {
    case ColumnNormalization::kNone:
      break;
    case ColumnNormalization::kUnitMax:
      for (Eigen::Index j = 0; j < values.cols(); ++j) {
        const double top = values.col(j).maxCoeff();
        if (top > 0.0) values.col(j) /= top;
      }
      break;
    case ColumnNormalization::kUnitL2Clip:
      ClipColumnsToUnitBall(values);
      break;
  }
  return DataMatrix(std::move(values));
}

Contaminated Contaminate(const DataMatrix& data, double column_fraction,
                         double entry_fraction, std::uint64_t seed) {
  if (!(column_fraction >= 0.0 && column_fraction <= 1.0) ||
      !(entry_fraction >= 0.0 && entry_fraction <= 1.0)) {
    throw DataError("contamination fractions must lie in [0, 1]");
  }
  const Eigen::Index rows = data.rows();
  const Eigen::Index cols = data.cols();
  // The tiny offset keeps products like 0.7 * 10 = 6.999... from rounding a
  // whole column or entry away.
  const auto target_cols = static_cast<Eigen::Index>(
      std::floor(column_fraction * static_cast<double>(cols) + 1e-9));
  const auto target_rows = static_cast<Eigen::Index>(
      std::floor(entry_fraction * static_cast<double>(rows) + 1e-9));

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);

  // Partial Fisher-Yates: the first `count` slots end up holding a uniform
  // sample without replacement.
  const auto sample_indices = [&gen](Eigen::Index total, Eigen::Index count) {
    std::vector<Eigen::Index> indices(static_cast<std::size_t>(total));
    std::iota(indices.begin(), indices.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < count; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, total - 1);
      std::swap(indices[static_cast<std::size_t>(i)],
                indices[static_cast<std::size_t>(pick(gen))]);
    }
    indices.resize(static_cast<std::size_t>(count));
    return indices;
  };

  Matrix values = data.values();
  BoolMask mask = BoolMask::Constant(rows, cols, false);
  for (Eigen::Index col : sample_indices(cols, target_cols)) {
    for (Eigen::Index row : sample_indices(rows, target_rows)) {
      values(row, col) = std::max(0.0, values(row, col) + noise(gen));
      mask(row, col) = true;
    }
  }
  return Contaminated{DataMatrix(std::move(values)), std::move(mask)};
}

Vocabulary::Vocabulary(std::vector<std::string> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw DataError("vocabulary is empty");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].empty()) {
      throw DataError("vocabulary line " + std::to_string(i + 1) +
                      " is empty");
    }
    if (!seen.insert(terms_[i]).second) {
      throw DataError("duplicate vocabulary term '" + terms_[i] +
                      "' at line " + std::to_string(i + 1));
    }
  }
}

Vocabulary Vocabulary::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    terms.push_back(line);
  }
  return Vocabulary(std::move(terms));
}

CorpusCounts::CorpusCounts(Matrix counts) : counts_(std::move(counts)) {
  if (counts_.rows() < 1 || counts_.cols() < 1) {
    throw DataError("count matrix must have at least one row and one column");
  }
  if (!counts_.allFinite() || (counts_.array() < 0.0).any()) {
    throw DataError("counts must be finite and non-negative");
  }
  for (Eigen::Index i = 0; i < counts_.rows(); ++i) {
    for (Eigen::Index j = 0; j < counts_.cols(); ++j) {
      if (std::abs(counts_(i, j) - std::round(counts_(i, j))) > 1e-9) {
        throw DataError("counts must be integral (row " +
                        std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1) + ")");
      }
    }
  }
  document_frequency_.resize(static_cast<std::size_t>(counts_.rows()));
  for (Eigen::Index i = 0; i < counts_.rows(); ++i) {
    document_frequency_[static_cast<std::size_t>(i)] =
        (counts_.row(i).array() > 0.0).count();
  }
}

DataMatrix TfIdf(const CorpusCounts& counts) {
  const double documents = static_cast<double>(counts.documents());
  Matrix weighted = counts.counts();
  for (Eigen::Index i = 0; i < weighted.rows(); ++i) {
    const auto df = counts.document_frequency()[static_cast<std::size_t>(i)];
    if (df == 0) {
      weighted.row(i).setZero();
      continue;
    }
    weighted.row(i) *= std::log(documents / static_cast<double>(df));
  }
  return DataMatrix(std::move(weighted));
}

SynthInstance SynthLowRank(Eigen::Index rows, Eigen::Index cols,
                           int latent_dim, std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw DataError("instance shape must be at least 1x1");
  }
  if (latent_dim < 1 || latent_dim > std::min(rows, cols)) {
    throw DataError("latent_dim must be in [1, min(rows, cols)]");
  }
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto fill = [&](Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = unit(gen);
    }
    return m;
  };

  Matrix dict = fill(rows, latent_dim);
  ClipColumnsToUnitBall(dict);
  Matrix coeffs = fill(latent_dim, cols);
  // Shrink coefficient columns until every product column fits in the unit
  // ball, so the instance is directly usable by the private fit. The product
  // is assembled column by column with the same expression the norm check
  // uses; a full matrix product rounds differently.
  Matrix product(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    product.col(j) = dict * coeffs.col(j);
    double norm = product.col(j).norm();
    while (norm > 1.0) {
      coeffs.col(j) /= norm * (1.0 + 1e-12);
      product.col(j) = dict * coeffs.col(j);
      norm = product.col(j).norm();
    }
  }
  return SynthInstance{DataMatrix(std::move(product)),
                       Dictionary(std::move(dict)),
                       Coefficients(std::move(coeffs))};
}

}  // namespace dpnmf
