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

#include "dpnmf/federation.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "dpnmf/accountant.h"
#include "dpnmf/error.h"
#include "dpnmf/init.h"
#include "dpnmf/metrics.h"

namespace dpnmf {

namespace {

void AppendValue(std::string& out, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), " %.17g", value);
  out += buffer;
}

void AppendMatrixRowMajor(std::string& out, const Matrix& values) {
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      AppendValue(out, values(i, j));
    }
  }
}

class LineReader {
 public:
  explicit LineReader(const std::string& line) : stream_(line) {}

  std::string Word() {
    std::string word;
    if (!(stream_ >> word)) {
      throw DataError("message truncated: expected another token");
    }
    return word;
  }

  long long Integer() {
    const std::string word = Word();
    char* end = nullptr;
    const long long value = std::strtoll(word.c_str(), &end, 10);
    if (end == word.c_str() || *end != '\0') {
      throw DataError("message has a non-integer field: '" + word + "'");
    }
    return value;
  }

  double Value() {
    const std::string word = Word();
    char* end = nullptr;
    const double value = std::strtod(word.c_str(), &end);
    if (end == word.c_str() || *end != '\0') {
      throw DataError("message has a non-numeric field: '" + word + "'");
    }
    return value;
  }

  Matrix MatrixRowMajor(Eigen::Index rows, Eigen::Index cols) {
    Matrix values(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        values(i, j) = Value();
      }
    }
    return values;
  }

  void ExpectEnd() {
    std::string extra;
    if (stream_ >> extra) {
      throw DataError("message has trailing data: '" + extra + "'");
    }
  }

 private:
  std::istringstream stream_;
};

std::pair<int, Eigen::Index> ReadRoundAndDim(LineReader& reader,
                                             const char* what) {
  const long long iteration = reader.Integer();
  const long long dim = reader.Integer();
  if (iteration < 1) {
    throw DataError(std::string(what) + " message round index must be >= 1");
  }
  if (dim < 1) {
    throw DataError(std::string(what) + " message dimension must be >= 1");
  }
  return {static_cast<int>(iteration), static_cast<Eigen::Index>(dim)};
}

}  // namespace

std::string Serialize(const CuratorMsg& msg) {
  if (msg.coeff_gram.rows() != msg.coeff_gram.cols() ||
      msg.data_cross.cols() != msg.coeff_gram.cols()) {
    throw DataError("curator message statistics have inconsistent shapes");
  }
  std::string out = "curator " + std::to_string(msg.iteration) + ' ' +
                    std::to_string(msg.coeff_gram.rows()) + ' ' +
                    std::to_string(msg.data_cross.rows());
  AppendMatrixRowMajor(out, msg.coeff_gram);
  AppendMatrixRowMajor(out, msg.data_cross);
  return out;
}

std::string Serialize(const AnalystMsg& msg) {
  std::string out = "analyst " + std::to_string(msg.iteration) + ' ' +
                    std::to_string(msg.dictionary.rows()) + ' ' +
                    std::to_string(msg.dictionary.cols());
  AppendMatrixRowMajor(out, msg.dictionary);
  return out;
}

CuratorMsg ParseCuratorMsg(const std::string& line) {
  LineReader reader(line);
  const std::string role = reader.Word();
  if (role != "curator") {
    throw DataError("expected a curator message, got role '" + role + "'");
  }
  const auto [iteration, latent_dim] = ReadRoundAndDim(reader, "curator");
  const long long rows = reader.Integer();
  if (rows < 1) throw DataError("curator message row count must be >= 1");
  CuratorMsg msg;
  msg.iteration = iteration;
  msg.coeff_gram = reader.MatrixRowMajor(latent_dim, latent_dim);
  msg.data_cross =
      reader.MatrixRowMajor(static_cast<Eigen::Index>(rows), latent_dim);
  reader.ExpectEnd();
  return msg;
}

AnalystMsg ParseAnalystMsg(const std::string& line) {
  LineReader reader(line);
  const std::string role = reader.Word();
  if (role != "analyst") {
    throw DataError("expected an analyst message, got role '" + role + "'");
  }
  const auto [iteration, rows] = ReadRoundAndDim(reader, "analyst");
  const long long latent_dim = reader.Integer();
  if (latent_dim < 1) {
    throw DataError("analyst message latent dimension must be >= 1");
  }
  AnalystMsg msg;
  msg.iteration = iteration;
  msg.dictionary =
      reader.MatrixRowMajor(rows, static_cast<Eigen::Index>(latent_dim));
  reader.ExpectEnd();
  return msg;
}

std::string Channel::Receive() {
  if (queue_.empty()) {
    throw DataError("receive on an empty channel");
  }
  std::string line = std::move(queue_.front());
  queue_.pop_front();
  return line;
}

Curator::Curator(const DataMatrix& data, const Hyperparams& params,
                 const PrivacyParams& privacy, const DataMatrix* clean)
    : data_(data),
      clean_(clean),
      params_(params),
      privacy_(privacy),
      rng_(privacy.seed),
      dict_(Matrix::Ones(1, 1)),
      coeffs_(Matrix::Zero(1, 1)),
      outliers_(Matrix::Zero(1, 1), 0.0) {
  params_.Validate();
  privacy_.Validate();
  CheckPrivacyFeasible(data_);
  if (clean_ != nullptr &&
      (clean_->rows() != data_.rows() || clean_->cols() != data_.cols())) {
    throw DataError("clean reference matrix shape differs from the data");
  }
  if (params_.max_iters > 0) {
    (void)privacy_.EpsilonFor(1, params_.max_iters);
  }
  InitFactors init = NndsvdInit(data_, params_.latent_dim);
  dict_ = std::move(init.dictionary);
  coeffs_ = std::move(init.coefficients);
  outliers_ = ZeroOutliers(data_.rows(), data_.cols(), params_.outlier_bound);
  trajectory_.reserve(params_.max_iters);
}

CuratorMsg Curator::EmitStatistics(int iteration) {
  if (awaiting_round_ != 0) {
    throw DataError("round " + std::to_string(awaiting_round_) +
                    " is still awaiting the analyst's dictionary");
  }
  if (iteration != completed_rounds_ + 1) {
    throw DataError("rounds must be driven in order: expected " +
                    std::to_string(completed_rounds_ + 1) + ", got " +
                    std::to_string(iteration));
  }
  if (iteration > params_.max_iters) {
    throw DataError("round " + std::to_string(iteration) +
                    " exceeds the configured iteration count");
  }
  const NoisyStatistics noisy = CuratorIteration(
      data_, dict_, coeffs_, outliers_, params_, privacy_, rng_, iteration);
  if (noisy.gram_noise_stddev > 0.0 && noisy.cross_noise_stddev > 0.0) {
    composed_rate_ +=
        RdpCurve::Gaussian(CoeffGramSensitivity(data_.cols()),
                           noisy.gram_noise_stddev)
            .rate() +
        RdpCurve::Gaussian(
            DataCrossSensitivity(data_.cols(), params_.model_outliers),
            noisy.cross_noise_stddev)
            .rate();
  } else {
    unbounded_spend_ = true;
  }
  awaiting_round_ = iteration;
  CuratorMsg msg;
  msg.iteration = iteration;
  msg.coeff_gram = noisy.coeff_gram;
  msg.data_cross = noisy.data_cross;
  return msg;
}

void Curator::ReceiveDictionary(const AnalystMsg& msg) {
  if (awaiting_round_ == 0) {
    throw DataError("no round is awaiting a dictionary");
  }
  if (msg.iteration != awaiting_round_) {
    throw DataError("dictionary for round " + std::to_string(msg.iteration) +
                    " does not match the awaited round " +
                    std::to_string(awaiting_round_));
  }
  dict_ = Dictionary(msg.dictionary);
  completed_rounds_ = awaiting_round_;
  awaiting_round_ = 0;

  const double loss =
      Loss(data_, dict_, coeffs_, outliers_, params_.outlier_penalty);
  if (!std::isfinite(loss)) {
    throw NumericError("loss became non-finite at round " +
                       std::to_string(completed_rounds_));
  }
  TrajectoryPoint point;
  point.iteration = completed_rounds_;
  point.loss = loss;
  if (clean_ != nullptr) {
    point.objective = ObjectiveValue(*clean_, dict_, coeffs_);
  }
  point.epsilon_overall = spend().epsilon;
  trajectory_.push_back(point);
}

PrivacySpend Curator::spend() const {
  if (unbounded_spend_) {
    PrivacySpend spend;
    spend.epsilon = std::numeric_limits<double>::infinity();
    spend.delta = privacy_.delta;
    spend.alpha_opt = std::numeric_limits<double>::infinity();
    spend.iterations = completed_rounds_;
    return spend;
  }
  return RdpToDp(RdpCurve::FromRate(composed_rate_), privacy_.delta,
                 completed_rounds_);
}

Analyst::Analyst(Dictionary initial, double step)
    : dict_(std::move(initial)), step_(step) {
  if (!(step_ > 0.0)) throw DataError("dictionary step must be > 0");
}

AnalystMsg Analyst::HandleStatistics(const CuratorMsg& msg) {
  if (msg.iteration != last_round_ + 1) {
    throw DataError("statistics for round " + std::to_string(msg.iteration) +
                    " arrived out of order (expected " +
                    std::to_string(last_round_ + 1) + ")");
  }
  dict_ = AnalystDictionaryStep(dict_, msg.coeff_gram, msg.data_cross, step_);
  last_round_ = msg.iteration;
  AnalystMsg reply;
  reply.iteration = msg.iteration;
  reply.dictionary = dict_.values();
  return reply;
}

ProtocolResult RunProtocol(const DataMatrix& data, const Hyperparams& params,
                           const PrivacyParams& privacy,
                           const DataMatrix* clean) {
  Curator curator(data, params, privacy, clean);
  Analyst analyst(curator.initial_dictionary(),
                  params.ResolvedDictStep(/*privacy_mode=*/true));
  Channel to_analyst;
  Channel to_curator;
  std::vector<std::string> transcript;
  transcript.reserve(2 * static_cast<std::size_t>(params.max_iters));

  int completed = 0;
  try {
    for (int iteration = 1; iteration <= params.max_iters; ++iteration) {
      std::string request = Serialize(curator.EmitStatistics(iteration));
      transcript.push_back(request);
      to_analyst.Send(std::move(request));

      const CuratorMsg stats = ParseCuratorMsg(to_analyst.Receive());
      std::string reply = Serialize(analyst.HandleStatistics(stats));
      transcript.push_back(reply);
      to_curator.Send(std::move(reply));

      curator.ReceiveDictionary(ParseAnalystMsg(to_curator.Receive()));
      completed = iteration;
    }
  } catch (const DataError& error) {
    throw DataError("protocol failed after round " +
                    std::to_string(completed) + ": " + error.what());
  }

  return ProtocolResult{analyst.dictionary(), std::move(transcript),
                        curator.trajectory(), curator.spend()};
}

}  // namespace dpnmf
