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
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dpnmf/data_io.h"
#include "dpnmf/init.h"
#include "test_support.h"

namespace dpnmf {
namespace {

using test::BitEqual;

TEST(Serialization, CuratorRoundTripIsBitExact) {
  CuratorMsg msg;
  msg.iteration = 7;
  msg.coeff_gram = Matrix(2, 2);
  msg.coeff_gram << 1.0 / 3.0, -1e-300, 3.141592653589793, 1e300;
  msg.data_cross = Matrix(3, 2);
  msg.data_cross << 0.1, -0.2, 1e-17, 123456789.123456789, -0.0, 42.0;

  const CuratorMsg parsed = ParseCuratorMsg(Serialize(msg));
  EXPECT_EQ(parsed.iteration, 7);
  EXPECT_TRUE(BitEqual(parsed.coeff_gram, msg.coeff_gram));
  EXPECT_TRUE(BitEqual(parsed.data_cross, msg.data_cross));
}

TEST(Serialization, AnalystRoundTripIsBitExact) {
  std::mt19937_64 gen(101);
  AnalystMsg msg;
  msg.iteration = 3;
  msg.dictionary = test::RandomUnitBallColumns(5, 2, gen);

  const AnalystMsg parsed = ParseAnalystMsg(Serialize(msg));
  EXPECT_EQ(parsed.iteration, 3);
  EXPECT_TRUE(BitEqual(parsed.dictionary, msg.dictionary));
}

TEST(Serialization, RejectsMalformedLines) {
  CuratorMsg msg;
  msg.iteration = 1;
  msg.coeff_gram = Matrix::Identity(2, 2);
  msg.data_cross = Matrix::Ones(2, 2);
  const std::string line = Serialize(msg);

  // Wrong role tag for the parser.
  EXPECT_THROW(ParseAnalystMsg(line), DataError);
  EXPECT_THROW(ParseCuratorMsg("analyst 1 2 2 1 0 0 1"), DataError);
  // Truncated payload.
  EXPECT_THROW(ParseCuratorMsg(line.substr(0, line.size() / 2)), DataError);
  // Trailing garbage.
  EXPECT_THROW(ParseCuratorMsg(line + " 99"), DataError);
  // Non-numeric token.
  EXPECT_THROW(ParseCuratorMsg("curator 1 x 2 1 0 0 1"), DataError);
  // Non-positive dimensions.
  EXPECT_THROW(ParseCuratorMsg("curator 1 0 2"), DataError);
  EXPECT_THROW(ParseAnalystMsg("analyst 1 -3 1 0.5"), DataError);
  EXPECT_THROW(ParseCuratorMsg(""), DataError);
}

TEST(Channel, FifoOrderAndEmptyReceiveFails) {
  Channel channel;
  channel.Send("first");
  channel.Send("second");
  EXPECT_EQ(channel.Receive(), "first");
  EXPECT_EQ(channel.Receive(), "second");
  EXPECT_TRUE(channel.empty());
  try {
    channel.Receive();
    FAIL() << "expected DataError";
  } catch (const DataError& error) {
    EXPECT_NE(std::string(error.what()).find("empty"), std::string::npos);
  }
}

struct ProtocolConfig {
  int latent_dim;
  bool model_outliers;
  std::uint64_t data_seed;
  std::uint64_t noise_seed;
};

TEST(RunProtocol, MatchesMonolithicPrivateFit) {
  const std::vector<ProtocolConfig> configs = {
      {1, true, 10, 1}, {2, false, 20, 2}, {3, true, 30, 3}};
  for (const ProtocolConfig& config : configs) {
    const SynthInstance instance =
        SynthLowRank(8, 24, config.latent_dim, config.data_seed);
    Hyperparams params;
    params.latent_dim = config.latent_dim;
    params.model_outliers = config.model_outliers;
    params.max_iters = 12;
    PrivacyParams privacy;
    privacy.seed = config.noise_seed;

    const ProtocolResult protocol =
        RunProtocol(instance.data, params, privacy, &instance.data);
    const DpFitResult monolithic =
        FitDp(instance.data, params, privacy, &instance.data);

    ASSERT_TRUE(BitEqual(protocol.dictionary.values(),
                         monolithic.dictionary.values()))
        << "k=" << config.latent_dim;
    ASSERT_EQ(protocol.trajectory.size(), monolithic.trajectory.size());
    for (std::size_t i = 0; i < protocol.trajectory.size(); ++i) {
      ASSERT_EQ(protocol.trajectory[i].loss, monolithic.trajectory[i].loss);
      ASSERT_EQ(protocol.trajectory[i].objective.has_value(),
                monolithic.trajectory[i].objective.has_value());
      if (protocol.trajectory[i].objective.has_value()) {
        ASSERT_EQ(*protocol.trajectory[i].objective,
                  *monolithic.trajectory[i].objective);
      }
    }
    EXPECT_DOUBLE_EQ(protocol.spend.epsilon, monolithic.spend.epsilon);
    EXPECT_DOUBLE_EQ(protocol.spend.alpha_opt, monolithic.spend.alpha_opt);
    EXPECT_EQ(protocol.spend.iterations, monolithic.spend.iterations);
  }
}

TEST(RunProtocol, TranscriptShape) {
  const SynthInstance instance = SynthLowRank(6, 18, 2, 40);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 5;

  const ProtocolResult result =
      RunProtocol(instance.data, params, PrivacyParams{});
  ASSERT_EQ(result.transcript.size(), 10u);
  for (int round = 0; round < 5; ++round) {
    const CuratorMsg request =
        ParseCuratorMsg(result.transcript[2 * round]);
    const AnalystMsg reply =
        ParseAnalystMsg(result.transcript[2 * round + 1]);
    ASSERT_EQ(request.iteration, round + 1);
    ASSERT_EQ(reply.iteration, round + 1);
  }
}

TEST(RunProtocol, ZeroRounds) {
  const SynthInstance instance = SynthLowRank(6, 18, 2, 41);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 0;

  const ProtocolResult result =
      RunProtocol(instance.data, params, PrivacyParams{});
  EXPECT_TRUE(result.transcript.empty());
  EXPECT_TRUE(result.trajectory.empty());
  EXPECT_TRUE(result.spend.degenerate);

  const InitFactors init = NndsvdInit(instance.data, 2);
  EXPECT_TRUE(
      BitEqual(result.dictionary.values(), init.dictionary.values()));
}

TEST(Analyst, BehaviorDependsOnlyOnMessages) {
  // Replay a recorded transcript into a fresh analyst that never saw any
  // data. Its replies must reproduce the recorded ones byte for byte, so the
  // dictionary update provably consumes nothing but the messages.
  const SynthInstance instance = SynthLowRank(7, 21, 2, 50);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 8;
  PrivacyParams privacy;
  privacy.seed = 5;

  const ProtocolResult recorded =
      RunProtocol(instance.data, params, privacy);

  const InitFactors init = NndsvdInit(instance.data, 2);
  Analyst replayed(init.dictionary, params.ResolvedDictStep(true));
  for (std::size_t i = 0; i < recorded.transcript.size(); i += 2) {
    const CuratorMsg request = ParseCuratorMsg(recorded.transcript[i]);
    const AnalystMsg reply = replayed.HandleStatistics(request);
    ASSERT_EQ(Serialize(reply), recorded.transcript[i + 1]);
  }
  EXPECT_TRUE(BitEqual(replayed.dictionary().values(),
                       recorded.dictionary.values()));
}

TEST(Curator, EnforcesRoundOrder) {
  const SynthInstance instance = SynthLowRank(5, 15, 2, 60);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 2;

  Curator curator(instance.data, params, PrivacyParams{});
  EXPECT_THROW(curator.EmitStatistics(2), DataError);

  const CuratorMsg first = curator.EmitStatistics(1);
  // A second emission without an acknowledgement is out of order.
  EXPECT_THROW(curator.EmitStatistics(2), DataError);

  Analyst analyst(curator.initial_dictionary(),
                  params.ResolvedDictStep(true));
  AnalystMsg reply = analyst.HandleStatistics(first);
  const AnalystMsg wrong_round{2, reply.dictionary};
  EXPECT_THROW(curator.ReceiveDictionary(wrong_round), DataError);
  curator.ReceiveDictionary(reply);

  reply = analyst.HandleStatistics(curator.EmitStatistics(2));
  curator.ReceiveDictionary(reply);
  // max_iters rounds completed; a further round is rejected.
  EXPECT_THROW(curator.EmitStatistics(3), DataError);

  EXPECT_EQ(curator.spend().iterations, 2);
}

TEST(Curator, PartialRunSpendCoversCompletedRounds) {
  const SynthInstance instance = SynthLowRank(5, 15, 2, 61);
  Hyperparams params;
  params.latent_dim = 2;
  params.max_iters = 3;

  Curator curator(instance.data, params, PrivacyParams{});
  Analyst analyst(curator.initial_dictionary(),
                  params.ResolvedDictStep(true));
  curator.ReceiveDictionary(analyst.HandleStatistics(curator.EmitStatistics(1)));

  const PrivacySpend after_one = curator.spend();
  EXPECT_EQ(after_one.iterations, 1);
  EXPECT_GT(after_one.epsilon, 0.0);

  curator.ReceiveDictionary(analyst.HandleStatistics(curator.EmitStatistics(2)));
  EXPECT_GT(curator.spend().epsilon, after_one.epsilon);
}

TEST(Analyst, RejectsOutOfOrderRounds) {
  std::mt19937_64 gen(102);
  Analyst analyst(Dictionary(test::RandomUnitBallColumns(4, 2, gen)), 0.01);

  CuratorMsg msg;
  msg.iteration = 2;
  msg.coeff_gram = Matrix::Identity(2, 2);
  msg.data_cross = Matrix::Ones(4, 2) * 0.1;
  EXPECT_THROW(analyst.HandleStatistics(msg), DataError);

  msg.iteration = 1;
  EXPECT_NO_THROW(analyst.HandleStatistics(msg));
  EXPECT_THROW(analyst.HandleStatistics(msg), DataError);
}

}  // namespace
}  // namespace dpnmf
