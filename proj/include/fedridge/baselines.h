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

#ifndef FEDRIDGE_BASELINES_H_
#define FEDRIDGE_BASELINES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "fedridge/protocol.h"
#include "fedridge/stats.h"

namespace fedridge {

// How a client's local objective ||A_k w - b_k||^2 + sigma (n_k / n) ||w||^2
// is scaled before differentiation. kPerSample divides it by n_k, which keeps
// a fixed learning rate stable regardless of client size; kSum uses it as is.
// Either way the n_k-weighted average of client objectives is proportional to
// the global ridge objective.
enum class LossScaling { kPerSample, kSum };

// Per-round Gaussian noise on transmitted model deltas (DP-FedAvg).
struct IterativeDp {
  double epsilon0 = 1.0;  // per-round budget
  double delta0 = 1e-5;
  double clip_norm = 1.0;
};

struct IterativeConfig {
  double learning_rate = 0.01;
  int local_epochs = 5;
  int rounds = 200;
  // Only read by RunFedProx; RunFedAvg always uses 0.
  double proximal_mu = 0.01;
  // 0 means full batch.
  int batch_size = 0;
  // 0 means every client participates in every round.
  int clients_per_round = 0;
  LossScaling loss_scaling = LossScaling::kPerSample;
  std::optional<IterativeDp> dp;
  // Starting point; zero when unset.
  std::optional<Eigen::VectorXd> initial_weights;
};

absl::Status ValidateIterativeConfig(const IterativeConfig& config);

struct IterativeResult {
  RidgeModel model;
  FederationRun run;
  // Test MSE after each round; empty when no test set was given.
  std::vector<double> trajectory;
};

// FedAvg on the ridge objective: broadcast, E local epochs of gradient steps
// per participating client, n_k-weighted averaging, R rounds. Deterministic
// given `seed`; per-client randomness is seeded by (seed, round, client_id).
// Fails with the round number if ||w|| exceeds 1e6 or becomes non-finite.
absl::StatusOr<IterativeResult> RunFedAvg(std::span<const ClientDataset> clients,
                                          double sigma,
                                          const IterativeConfig& config,
                                          uint64_t seed,
                                          const ClientDataset* test_set = nullptr);

// FedAvg plus the proximal term mu (w - w_global) in every local gradient.
absl::StatusOr<IterativeResult> RunFedProx(
    std::span<const ClientDataset> clients, double sigma,
    const IterativeConfig& config, uint64_t seed,
    const ClientDataset* test_set = nullptr);

// Best single gradient step from zero, w = eta h, against the ridge solution.
struct GradientInsufficiencyReport {
  double best_eta = 0.0;      // <h, w_sigma> / ||h||^2
  double absolute_gap = 0.0;  // ||best_eta h - w_sigma||
  double relative_gap = 0.0;  // absolute_gap / ||w_sigma||
  bool insufficient = false;  // relative_gap > 1e-3
};

absl::StatusOr<GradientInsufficiencyReport> GradientInsufficiencyCheck(
    const SufficientStats& stats, double sigma);
absl::StatusOr<GradientInsufficiencyReport> GradientInsufficiencyCheck(
    std::span<const ClientDataset> clients, double sigma);

}  // namespace fedridge

#endif  // FEDRIDGE_BASELINES_H_
