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

#ifndef DPNMF_FEDERATION_H_
#define DPNMF_FEDERATION_H_

#include <deque>
#include <string>
#include <vector>

#include "dpnmf/matrix_core.h"
#include "dpnmf/privacy.h"
#include "dpnmf/solver.h"

namespace dpnmf {

// Two-party execution of the private fit. The curator owns the data,
// coefficients, and outliers; the analyst owns the dictionary. One round per
// iteration: the curator sends the noise-perturbed statistics, the analyst
// replies with the updated dictionary. Run against an in-process channel the
// protocol reproduces FitDp bit for bit; the messages are plain text lines,
// so a transcript can be stored and replayed.

struct CuratorMsg {
  int iteration = 0;  // 1-based round index
  Matrix coeff_gram;
  Matrix data_cross;
};

struct AnalystMsg {
  int iteration = 0;
  Matrix dictionary;
};

// Line formats (single space separated, 17 significant digits, row-major):
//   curator <iter> <latent_dim> <rows> <gram values> <cross values>
//   analyst <iter> <rows> <latent_dim> <dictionary values>
// Serialization round-trips every double bit-exactly.
std::string Serialize(const CuratorMsg& msg);
std::string Serialize(const AnalystMsg& msg);
CuratorMsg ParseCuratorMsg(const std::string& line);
AnalystMsg ParseAnalystMsg(const std::string& line);

// Ordered, reliable, in-process message queue. Receiving from an empty
// channel is a protocol failure.
class Channel {
 public:
  void Send(std::string line) { queue_.push_back(std::move(line)); }
  std::string Receive();
  bool empty() const { return queue_.empty(); }

 private:
  std::deque<std::string> queue_;
};

// Curator endpoint. Rounds must be driven in order: EmitStatistics(t) then
// ReceiveDictionary for the same t, starting at t = 1.
class Curator {
 public:
  // Validates the data the same way FitDp does. `clean` may be null; when
  // set, trajectory points record the reconstruction objective against it.
  Curator(const DataMatrix& data, const Hyperparams& params,
          const PrivacyParams& privacy, const DataMatrix* clean = nullptr);

  const Dictionary& initial_dictionary() const { return dict_; }

  // Advances the local factors and returns this round's statistics message.
  CuratorMsg EmitStatistics(int iteration);

  // Accepts the analyst's dictionary for the round just emitted and records
  // the trajectory point.
  void ReceiveDictionary(const AnalystMsg& msg);

  const Trajectory& trajectory() const { return trajectory_; }
  // Spend over the rounds completed so far.
  PrivacySpend spend() const;

 private:
  const DataMatrix& data_;
  const DataMatrix* clean_;
  Hyperparams params_;
  PrivacyParams privacy_;
  NoiseRng rng_;
  Dictionary dict_;
  Coefficients coeffs_;
  Outliers outliers_;
  Trajectory trajectory_;
  double composed_rate_ = 0.0;
  bool unbounded_spend_ = false;
  int awaiting_round_ = 0;  // round emitted but not yet acknowledged
  int completed_rounds_ = 0;
};

// Analyst endpoint: a dictionary and a step size, nothing else.
class Analyst {
 public:
  Analyst(Dictionary initial, double step);

  AnalystMsg HandleStatistics(const CuratorMsg& msg);

  const Dictionary& dictionary() const { return dict_; }

 private:
  Dictionary dict_;
  double step_;
  int last_round_ = 0;
};

struct ProtocolResult {
  Dictionary dictionary;
  std::vector<std::string> transcript;  // all messages, in send order
  Trajectory trajectory;
  PrivacySpend spend;
};

// Drives max_iters rounds of the curator/analyst protocol over in-process
// channels. A failure mid-protocol is reported with the last completed round.
ProtocolResult RunProtocol(const DataMatrix& data, const Hyperparams& params,
                           const PrivacyParams& privacy,
                           const DataMatrix* clean = nullptr);

}  // namespace dpnmf

#endif  // DPNMF_FEDERATION_H_
