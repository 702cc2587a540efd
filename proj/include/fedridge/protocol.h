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

#ifndef FEDRIDGE_PROTOCOL_H_
#define FEDRIDGE_PROTOCOL_H_

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "fedridge/stats.h"

namespace fedridge {

// Every transmitted scalar is accounted as a 64-bit float.
inline constexpr int64_t kBytesPerScalar = 8;

// One client's upload: packed upper-triangle Gram followed by the moment
// vector. The sample count travels as header metadata and is not metered.
struct StatsMessage {
  int client_id = 0;
  int dim = 0;
  int64_t sample_count = 0;
  std::vector<double> payload;
  int64_t float_count = 0;
  int64_t byte_count = 0;
};

StatsMessage EncodeStatsMessage(const SufficientStats& stats);
absl::StatusOr<SufficientStats> DecodeStatsMessage(const StatsMessage& message);

struct FederationRun {
  std::vector<int> participating;  // ascending client ids
  int round_count = 0;
  int64_t total_upload_bytes = 0;
  int64_t total_download_bytes = 0;
  double wall_time_seconds = 0.0;
  // Number of Gaussian-mechanism releases per client over the whole run.
  int privatization_events = 0;
};

// In-process transport with byte metering. Uploads are queued per client and
// drained by the server in ascending client id order.
class SimulatedChannel {
 public:
  void Upload(StatsMessage message);
  // Uploads of `floats` raw scalars from a client (iterative baselines).
  void MeterUpload(int client_id, int64_t floats);
  void Broadcast(const Eigen::VectorXd& weights, std::span<const int> recipients);
  std::vector<StatsMessage> DrainUploads();

  int64_t upload_bytes() const { return upload_bytes_; }
  int64_t download_bytes() const { return download_bytes_; }

 private:
  std::map<int, std::deque<StatsMessage>> queues_;
  int64_t upload_bytes_ = 0;
  int64_t download_bytes_ = 0;
};

struct OneShotResult {
  RidgeModel model;
  FederationRun run;
};

// Server side of the protocol: transmits each client's statistics through a
// metered channel, aggregates in client id order, solves at `sigma` and
// broadcasts the weights back to the senders.
absl::StatusOr<OneShotResult> FuseAndSolve(
    std::span<const SufficientStats> client_stats, double sigma,
    Provenance provenance);

// The one-shot protocol restricted to `participating` client ids.
// Non-participating clients neither compute nor send anything.
absl::StatusOr<OneShotResult> RunOneShot(std::span<const ClientDataset> clients,
                                         double sigma,
                                         std::span<const int> participating);

// All clients participate.
absl::StatusOr<OneShotResult> RunOneShot(std::span<const ClientDataset> clients,
                                         double sigma);

struct OneShotVariant {};
struct IterativeVariant {
  int rounds = 1;
};
using ProtocolVariant = std::variant<OneShotVariant, IterativeVariant>;

struct CommunicationCost {
  int64_t upload_floats = 0;
  int64_t download_floats = 0;

  int64_t total_floats() const { return upload_floats + download_floats; }
  friend bool operator==(const CommunicationCost&,
                         const CommunicationCost&) = default;
};

// Per-client float counts: one-shot uploads d(d+1)/2 + d and downloads d;
// an R-round iterative method moves R d each way.
CommunicationCost CommunicationBudget(int dim, ProtocolVariant variant);

// One-shot total traffic is strictly below R-round iterative traffic iff
// R > (d + 5) / 4.
double EfficiencyThreshold(int dim);

}  // namespace fedridge

#endif  // FEDRIDGE_PROTOCOL_H_
