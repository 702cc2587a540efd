// Copyright 2026 The FedRidge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedridge/protocol.h"

#include <cstdint>
#include <numeric>
#include <vector>

#include "absl/status/status.h"
#include "fedridge/random.h"
#include "fedridge/stats.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_data.h"

namespace fedridge {
namespace {

TEST(StatsMessageTest, FloatAndByteCounts) {
  for (int d : {1, 5, 100}) {
    const StatsMessage message = EncodeStatsMessage(SufficientStats(d, 3));
    EXPECT_EQ(message.float_count, d * (d + 1) / 2 + d);
    EXPECT_EQ(message.byte_count, 8 * message.float_count);
    EXPECT_EQ(static_cast<int64_t>(message.payload.size()), message.float_count);
    EXPECT_EQ(message.client_id, 3);
  }
}

TEST(StatsMessageTest, RoundTripIsBitExact) {
  const std::vector<ClientDataset> clients = RandomClients(1, 20, 6, 1);
  auto stats = ComputeLocalStats(clients[0]);
  ASSERT_TRUE(stats.ok());
  auto decoded = DecodeStatsMessage(EncodeStatsMessage(*stats));
  ASSERT_TRUE(decoded.ok());
  EXPECT_EQ(decoded->packed_gram(), stats->packed_gram());
  EXPECT_EQ(decoded->moment(), stats->moment());
  EXPECT_EQ(decoded->sample_count(), 20);
  EXPECT_EQ(decoded->client_id(), 1);
}

TEST(StatsMessageTest, CorruptPayloadIsRejected) {
  StatsMessage message = EncodeStatsMessage(SufficientStats(4, 1));
  message.payload.pop_back();
  EXPECT_EQ(DecodeStatsMessage(message).status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(RunOneShotTest, AllClientsEqualsCentralized) {
  const std::vector<ClientDataset> clients = RandomClients(8, 30, 10, 2);
  auto fused = RunOneShot(clients, 0.01);
  auto central = CentralizedSolve(clients, 0.01);
  ASSERT_TRUE(fused.ok() && central.ok());
  EXPECT_LE((fused->model.weights - central->weights).lpNorm<Eigen::Infinity>(),
            1e-10);
  EXPECT_EQ(fused->run.round_count, 1);
  EXPECT_EQ(fused->run.participating.size(), 8u);
}

TEST(RunOneShotTest, SingleClientEqualsDirectSolve) {
  const std::vector<ClientDataset> clients = RandomClients(5, 25, 6, 3);
  const int only[] = {1};
  auto fused = RunOneShot(clients, 0.1, only);
  ASSERT_TRUE(fused.ok());
  oracle::Matrix rows;
  oracle::Vector targets;
  PoolRows(clients, {1}, rows, targets);
  EXPECT_LE(oracle::MaxAbsDiff(oracle::RidgeFromRows(rows, targets, 6, 0.1),
                               fused->model.weights),
            1e-10);
  EXPECT_EQ(fused->run.participating, std::vector<int>{1});
}

TEST(RunOneShotTest, DefaultScaleUploadBytes) {
  std::vector<ClientDataset> clients;
  for (int k = 1; k <= 20; ++k) {
    ClientDataset data;
    data.client_id = k;
    data.features = Eigen::MatrixXd::Identity(100, 100);
    data.targets = Eigen::VectorXd::Zero(100);
    clients.push_back(std::move(data));
  }
  auto fused = RunOneShot(clients, 0.01);
  ASSERT_TRUE(fused.ok());
  EXPECT_EQ(fused->run.total_upload_bytes, 824000);
  EXPECT_EQ(fused->run.total_download_bytes, 20 * 100 * 8);
}

TEST(RunOneShotTest, RejectsEmptyAndUnknownParticipants) {
  const std::vector<ClientDataset> clients = RandomClients(3, 10, 2, 4);
  auto empty = RunOneShot(clients, 0.1, std::span<const int>());
  EXPECT_EQ(empty.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(empty.status().message().find("no data"), absl::string_view::npos);
  const int unknown[] = {1, 9};
  EXPECT_EQ(RunOneShot(clients, 0.1, unknown).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(FuseAndSolve({}, 0.1, Provenance::kExact).ok());
}

// Property: every nonempty subset fuses to the from-scratch solve of its own
// rows, and the run accounts exactly for the participants.
TEST(RunOneShotTest, DropoutExactnessProperty) {
  constexpr int kClients = 10;
  constexpr int kDim = 5;
  const std::vector<ClientDataset> clients = RandomClients(kClients, 12, kDim, 5);
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<int> ids(kClients);
    std::iota(ids.begin(), ids.end(), 1);
    rng.Shuffle(ids);
    ids.resize(1 + rng.UniformIndex(kClients));
    auto fused = RunOneShot(clients, 0.05, ids);
    ASSERT_TRUE(fused.ok());
    oracle::Matrix rows;
    oracle::Vector targets;
    PoolRows(clients, ids, rows, targets);
    EXPECT_LE(oracle::MaxAbsDiff(oracle::RidgeFromRows(rows, targets, kDim, 0.05),
                                 fused->model.weights),
              1e-10);
    const int64_t s = static_cast<int64_t>(ids.size());
    EXPECT_EQ(fused->run.total_upload_bytes, s * (kDim * (kDim + 1) / 2 + kDim) * 8);
    EXPECT_EQ(fused->run.total_download_bytes, s * kDim * 8);
    EXPECT_EQ(fused->run.round_count, 1);
    std::vector<int> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(fused->run.participating, sorted);
  }
}

// Adding a client changes the solution only through its additive stats.
TEST(RunOneShotTest, AddingClientIsAdditive) {
  const std::vector<ClientDataset> clients = RandomClients(4, 15, 3, 6);
  const int first_three[] = {1, 2, 3};
  auto partial = RunOneShot(clients, 0.2, first_three);
  auto all = RunOneShot(clients, 0.2);
  ASSERT_TRUE(partial.ok() && all.ok());
  std::vector<SufficientStats> stats;
  for (const ClientDataset& c : clients) stats.push_back(*ComputeLocalStats(c));
  auto updated = MergeStats(stats, 3);
  auto expected = RidgeSolve(*updated, 0.2);
  EXPECT_LE((expected->weights - all->model.weights).lpNorm<Eigen::Infinity>(),
            1e-12);
  EXPECT_GT((partial->model.weights - all->model.weights).norm(), 0.0);
}

TEST(SimulatedChannelTest, DrainsInClientOrderAndMeters) {
  SimulatedChannel channel;
  channel.Upload(EncodeStatsMessage(SufficientStats(2, 7)));
  channel.Upload(EncodeStatsMessage(SufficientStats(2, 3)));
  channel.MeterUpload(5, 10);
  const int recipients[] = {3, 7};
  channel.Broadcast(Eigen::VectorXd::Zero(2), recipients);
  const std::vector<StatsMessage> drained = channel.DrainUploads();
  ASSERT_EQ(drained.size(), 2u);
  EXPECT_EQ(drained[0].client_id, 3);
  EXPECT_EQ(drained[1].client_id, 7);
  EXPECT_EQ(channel.upload_bytes(), (5 + 5 + 10) * 8);
  EXPECT_EQ(channel.download_bytes(), 2 * 2 * 8);
  EXPECT_TRUE(channel.DrainUploads().empty());
}

TEST(CommunicationBudgetTest, ClosedForms) {
  EXPECT_EQ(CommunicationBudget(100, OneShotVariant{}),
            (CommunicationCost{5150, 100}));
  EXPECT_EQ(CommunicationBudget(100, IterativeVariant{200}),
            (CommunicationCost{20000, 20000}));
  EXPECT_EQ(CommunicationBudget(1, OneShotVariant{}), (CommunicationCost{2, 1}));
}

TEST(EfficiencyThresholdTest, Values) {
  EXPECT_DOUBLE_EQ(EfficiencyThreshold(100), 26.25);
  EXPECT_DOUBLE_EQ(EfficiencyThreshold(3), 2.0);
  EXPECT_DOUBLE_EQ(EfficiencyThreshold(795), 200.0);
}

// Property: R > threshold exactly when one-shot total traffic is lower.
TEST(EfficiencyThresholdTest, AgreesWithBruteForceTotals) {
  for (int d : {1, 2, 3, 7, 50, 100, 795}) {
    const int64_t one_shot = CommunicationBudget(d, OneShotVariant{}).total_floats();
    for (int r = 1; r <= 1000; ++r) {
      const int64_t iterative =
          CommunicationBudget(d, IterativeVariant{r}).total_floats();
      ASSERT_EQ(r > EfficiencyThreshold(d), one_shot < iterative)
          << "d=" << d << " R=" << r;
    }
  }
}

}  // namespace
}  // namespace fedridge
