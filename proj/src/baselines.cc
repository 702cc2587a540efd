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

#include "fedridge/baselines.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/strings/str_format.h"
#include "fedridge/privacy.h"
#include "fedridge/random.h"

namespace fedridge {
namespace {

constexpr double kDivergenceNorm = 1e6;
constexpr uint64_t kSamplingStream = 0x5A4D504CULL;
constexpr double kInsufficiencyThreshold = 1e-3;

// Runs E local epochs starting from `global` and returns the local model.
Eigen::VectorXd LocalUpdate(const ClientDataset& client,
                            const Eigen::VectorXd& global, double sigma,
                            int64_t total_samples, double mu,
                            const IterativeConfig& config, Rng& batch_rng) {
  const int n = client.num_samples();
  Eigen::VectorXd w = global;
  if (n == 0) return w;
  const double share = static_cast<double>(n) / total_samples;
  // Per-sample scaling divides the whole local objective by n_k.
  const double scale =
      config.loss_scaling == LossScaling::kPerSample ? 1.0 / n : 1.0;
  const int batch = config.batch_size > 0 ? std::min(config.batch_size, n) : n;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd batch_features;
  Eigen::VectorXd batch_targets;
  for (int epoch = 0; epoch < config.local_epochs; ++epoch) {
    if (batch < n) batch_rng.Shuffle(order);
    for (int begin = 0; begin < n; begin += batch) {
      const int size = std::min(batch, n - begin);
      Eigen::VectorXd grad;
      if (size == n) {
        grad = client.features.transpose() *
               (client.features * w - client.targets);
      } else {
        batch_features.resize(size, client.dim());
        batch_targets.resize(size);
        for (int r = 0; r < size; ++r) {
          batch_features.row(r) = client.features.row(order[begin + r]);
          batch_targets[r] = client.targets[order[begin + r]];
        }
        grad = batch_features.transpose() * (batch_features * w - batch_targets);
      }
      // Unbiased estimate of 2 A_k^T (A_k w - b_k) from the batch.
      grad *= 2.0 * static_cast<double>(n) / size;
      grad += 2.0 * sigma * share * w;
      grad *= scale;
      if (mu > 0.0) grad += mu * (w - global);
      w -= config.learning_rate * grad;
    }
  }
  return w;
}

absl::StatusOr<IterativeResult> RunIterative(
    std::span<const ClientDataset> clients, double sigma,
    const IterativeConfig& config, uint64_t seed, const ClientDataset* test_set,
    double mu) {
  const auto start = std::chrono::steady_clock::now();
  if (absl::Status s = ValidateIterativeConfig(config); !s.ok()) return s;
  if (!(sigma > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sigma must be positive, got %g", sigma));
  }
  if (clients.empty()) return absl::InvalidArgumentError("no clients");
  const int dim = clients.front().dim();
  int64_t total_samples = 0;
  for (const ClientDataset& client : clients) {
    if (absl::Status s = ValidateDataset(client); !s.ok()) return s;
    if (client.dim() != dim) {
      return absl::InvalidArgumentError("clients disagree on dimension");
    }
    total_samples += client.num_samples();
  }
  if (total_samples == 0) return absl::InvalidArgumentError("no data");

  double noise_scale = 0.0;
  if (config.dp.has_value()) {
    absl::StatusOr<double> tau =
        NoiseScale(config.dp->epsilon0, config.dp->delta0);
    if (!tau.ok()) return tau.status();
    noise_scale = *tau * config.dp->clip_norm;
  }

  Eigen::VectorXd global = config.initial_weights.has_value()
                               ? *config.initial_weights
                               : Eigen::VectorXd::Zero(dim);
  if (global.size() != dim) {
    return absl::InvalidArgumentError("initial weights have wrong dimension");
  }

  const int num_clients = static_cast<int>(clients.size());
  const bool sampled = config.clients_per_round > 0 &&
                       config.clients_per_round < num_clients;
  std::vector<int> all(num_clients);
  std::iota(all.begin(), all.end(), 0);

  SimulatedChannel channel;
  IterativeResult result;
  std::vector<int> ever_participated(num_clients, 0);
  for (int round = 1; round <= config.rounds; ++round) {
    std::vector<int> chosen = all;
    if (sampled) {
      Rng sampler(MixSeed(seed, kSamplingStream, round));
      sampler.Shuffle(chosen);
      chosen.resize(config.clients_per_round);
      std::sort(chosen.begin(), chosen.end());
    }
    std::vector<int> recipient_ids;
    int64_t round_samples = 0;
    for (int index : chosen) {
      recipient_ids.push_back(clients[index].client_id);
      round_samples += clients[index].num_samples();
      ever_participated[index] = 1;
    }
    channel.Broadcast(global, recipient_ids);

    Eigen::VectorXd update = Eigen::VectorXd::Zero(dim);
    for (int index : chosen) {
      const ClientDataset& client = clients[index];
      const uint64_t client_seed =
          MixSeed(seed, static_cast<uint64_t>(round),
                  static_cast<uint64_t>(client.client_id));
      Rng batch_rng(MixSeed(client_seed, 0));
      Eigen::VectorXd delta =
          LocalUpdate(client, global, sigma, total_samples, mu, config,
                      batch_rng) -
          global;
      if (config.dp.has_value()) {
        const double norm = delta.norm();
        if (norm > config.dp->clip_norm) delta *= config.dp->clip_norm / norm;
        Rng noise_rng(MixSeed(client_seed, 1));
        for (int i = 0; i < dim; ++i) delta[i] += noise_scale * noise_rng.Normal();
      }
      channel.MeterUpload(client.client_id, dim);
      if (round_samples > 0) {
        update += (static_cast<double>(client.num_samples()) / round_samples) *
                  delta;
      }
    }
    global += update;

    if (!global.allFinite() || global.norm() > kDivergenceNorm) {
      return absl::OutOfRangeError(absl::StrFormat(
          "iterative training diverged at round %d (||w|| = %g)", round,
          global.norm()));
    }
    if (test_set != nullptr) {
      result.trajectory.push_back(MeanSquaredError(global, *test_set));
    }
  }

  result.model.weights = std::move(global);
  result.model.sigma = sigma;
  result.model.provenance = Provenance::kIterative;
  for (int i = 0; i < num_clients; ++i) {
    if (ever_participated[i]) {
      result.run.participating.push_back(clients[i].client_id);
    }
  }
  std::sort(result.run.participating.begin(), result.run.participating.end());
  result.run.round_count = config.rounds;
  result.run.total_upload_bytes = channel.upload_bytes();
  result.run.total_download_bytes = channel.download_bytes();
  result.run.privatization_events = config.dp.has_value() ? config.rounds : 0;
  result.run.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace

absl::Status ValidateIterativeConfig(const IterativeConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning rate must be positive");
  }
  if (config.local_epochs < 1) {
    return absl::InvalidArgumentError("local epochs must be >= 1");
  }
  if (config.rounds < 1) {
    return absl::InvalidArgumentError("rounds must be >= 1");
  }
  if (!(config.proximal_mu >= 0.0)) {
    return absl::InvalidArgumentError("proximal mu must be >= 0");
  }
  if (config.batch_size < 0 || config.clients_per_round < 0) {
    return absl::InvalidArgumentError(
        "batch size and clients per round must be >= 0");
  }
  if (config.dp.has_value() && !(config.dp->clip_norm > 0.0)) {
    return absl::InvalidArgumentError("clip norm must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<IterativeResult> RunFedAvg(std::span<const ClientDataset> clients,
                                          double sigma,
                                          const IterativeConfig& config,
                                          uint64_t seed,
                                          const ClientDataset* test_set) {
  return RunIterative(clients, sigma, config, seed, test_set, /*mu=*/0.0);
}

absl::StatusOr<IterativeResult> RunFedProx(
    std::span<const ClientDataset> clients, double sigma,
    const IterativeConfig& config, uint64_t seed,
    const ClientDataset* test_set) {
  return RunIterative(clients, sigma, config, seed, test_set,
                      config.proximal_mu);
}

absl::StatusOr<GradientInsufficiencyReport> GradientInsufficiencyCheck(
    const SufficientStats& stats, double sigma) {
  absl::StatusOr<RidgeModel> model = RidgeSolve(stats, sigma);
  if (!model.ok()) return model.status();
  const Eigen::VectorXd& h = stats.moment();
  const Eigen::VectorXd& w = model->weights;
  GradientInsufficiencyReport report;
  const double h_norm2 = h.squaredNorm();
  if (h_norm2 == 0.0) return report;
  report.best_eta = h.dot(w) / h_norm2;
  report.absolute_gap = (report.best_eta * h - w).norm();
  const double w_norm = w.norm();
  report.relative_gap = w_norm > 0.0 ? report.absolute_gap / w_norm : 0.0;
  report.insufficient = report.relative_gap > kInsufficiencyThreshold;
  return report;
}

absl::StatusOr<GradientInsufficiencyReport> GradientInsufficiencyCheck(
    std::span<const ClientDataset> clients, double sigma) {
  if (clients.empty()) return absl::InvalidArgumentError("no clients");
  std::vector<SufficientStats> parts;
  for (const ClientDataset& client : clients) {
    absl::StatusOr<SufficientStats> stats = ComputeLocalStats(client);
    if (!stats.ok()) return stats.status();
    parts.push_back(*std::move(stats));
  }
  absl::StatusOr<SufficientStats> total =
      MergeStats(parts, clients.front().dim());
  if (!total.ok()) return total.status();
  return GradientInsufficiencyCheck(*total, sigma);
}

}  // namespace fedridge
