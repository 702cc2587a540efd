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

#include <algorithm>
#include <chrono>
#include <set>
#include <utility>

#include "absl/strings/str_format.h"

namespace fedridge {

StatsMessage EncodeStatsMessage(const SufficientStats& stats) {
  StatsMessage message;
  message.client_id = stats.client_id();
  message.dim = stats.dim();
  message.sample_count = stats.sample_count();
  message.payload = stats.packed_gram();
  message.payload.insert(message.payload.end(), stats.moment().begin(),
                         stats.moment().end());
  message.float_count = static_cast<int64_t>(message.payload.size());
  message.byte_count = kBytesPerScalar * message.float_count;
  return message;
}

absl::StatusOr<SufficientStats> DecodeStatsMessage(const StatsMessage& message) {
  const size_t packed = SufficientStats::PackedSize(message.dim);
  if (message.payload.size() != packed + message.dim) {
    return absl::DataLossError(absl::StrFormat(
        "client %d: payload has %d scalars, expected %d", message.client_id,
        message.payload.size(), packed + message.dim));
  }
  std::vector<double> gram(message.payload.begin(),
                           message.payload.begin() + packed);
  Eigen::VectorXd moment = Eigen::Map<const Eigen::VectorXd>(
      message.payload.data() + packed, message.dim);
  return SufficientStats::FromPacked(message.dim, std::move(gram),
                                     std::move(moment), message.sample_count,
                                     message.client_id);
}

void SimulatedChannel::Upload(StatsMessage message) {
  upload_bytes_ += message.byte_count;
  const int id = message.client_id;
  queues_[id].push_back(std::move(message));
}

void SimulatedChannel::MeterUpload(int /*client_id*/, int64_t floats) {
  upload_bytes_ += kBytesPerScalar * floats;
}

void SimulatedChannel::Broadcast(const Eigen::VectorXd& weights,
                                 std::span<const int> recipients) {
  download_bytes_ += kBytesPerScalar * weights.size() *
                     static_cast<int64_t>(recipients.size());
}

std::vector<StatsMessage> SimulatedChannel::DrainUploads() {
  std::vector<StatsMessage> out;
  for (auto& [id, queue] : queues_) {
    while (!queue.empty()) {
      out.push_back(std::move(queue.front()));
      queue.pop_front();
    }
  }
  queues_.clear();
  return out;
}

absl::StatusOr<OneShotResult> FuseAndSolve(
    std::span<const SufficientStats> client_stats, double sigma,
    Provenance provenance) {
  if (client_stats.empty()) {
    return absl::InvalidArgumentError("no data: no participating clients");
  }
  const int dim = client_stats.front().dim();
  SimulatedChannel channel;
  for (const SufficientStats& stats : client_stats) {
    channel.Upload(EncodeStatsMessage(stats));
  }

  std::vector<SufficientStats> received;
  std::vector<int> senders;
  for (const StatsMessage& message : channel.DrainUploads()) {
    absl::StatusOr<SufficientStats> stats = DecodeStatsMessage(message);
    if (!stats.ok()) return stats.status();
    senders.push_back(message.client_id);
    received.push_back(*std::move(stats));
  }
  absl::StatusOr<SufficientStats> total = MergeStats(received, dim);
  if (!total.ok()) return total.status();
  absl::StatusOr<RidgeModel> model = RidgeSolve(*total, sigma, provenance);
  if (!model.ok()) return model.status();
  channel.Broadcast(model->weights, senders);

  OneShotResult result;
  result.model = *std::move(model);
  result.run.participating = std::move(senders);
  result.run.round_count = 1;
  result.run.total_upload_bytes = channel.upload_bytes();
  result.run.total_download_bytes = channel.download_bytes();
  return result;
}

absl::StatusOr<OneShotResult> RunOneShot(std::span<const ClientDataset> clients,
                                         double sigma,
                                         std::span<const int> participating) {
  const auto start = std::chrono::steady_clock::now();
  const std::set<int> wanted(participating.begin(), participating.end());
  if (wanted.empty()) {
    return absl::InvalidArgumentError("no data: participating set is empty");
  }
  std::set<int> known;
  std::vector<SufficientStats> uploads;
  for (const ClientDataset& client : clients) {
    known.insert(client.client_id);
    if (!wanted.contains(client.client_id)) continue;
    absl::StatusOr<SufficientStats> stats = ComputeLocalStats(client);
    if (!stats.ok()) return stats.status();
    uploads.push_back(*std::move(stats));
  }
  for (int id : wanted) {
    if (!known.contains(id)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("participating client %d does not exist", id));
    }
  }
  absl::StatusOr<OneShotResult> result =
      FuseAndSolve(uploads, sigma, Provenance::kExact);
  if (!result.ok()) return result.status();
  result->run.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

absl::StatusOr<OneShotResult> RunOneShot(std::span<const ClientDataset> clients,
                                         double sigma) {
  std::vector<int> all;
  all.reserve(clients.size());
  for (const ClientDataset& client : clients) all.push_back(client.client_id);
  return RunOneShot(clients, sigma, all);
}

CommunicationCost CommunicationBudget(int dim, ProtocolVariant variant) {
  const int64_t d = dim;
  if (const auto* iterative = std::get_if<IterativeVariant>(&variant)) {
    return {iterative->rounds * d, iterative->rounds * d};
  }
  return {d * (d + 1) / 2 + d, d};
}

double EfficiencyThreshold(int dim) { return (dim + 5) / 4.0; }

}  // namespace fedridge
