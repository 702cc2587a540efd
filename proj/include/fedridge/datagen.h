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

#ifndef FEDRIDGE_DATAGEN_H_
#define FEDRIDGE_DATAGEN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "fedridge/stats.h"

namespace fedridge {

// Synthetic heterogeneous regression problem.
struct SynthSpec {
  int num_clients = 20;          // K
  int samples_per_client = 500;  // n_k before the test holdout
  int dim = 100;                 // d
  double gamma = 0.5;            // heterogeneity dial in [0, 1]
  double noise_std = 0.1;        // label noise standard deviation
  double test_fraction = 0.2;
  uint64_t seed = 0;
  bool dp_normalize = false;
};

absl::Status ValidateSynthSpec(const SynthSpec& spec);

struct SynthData {
  std::vector<ClientDataset> clients;  // client ids 1..K
  ClientDataset test_set;              // client id 0
  Eigen::VectorXd true_weights;        // unit norm w*
};

// 1. w* ~ N(0, I_d), scaled to unit norm.
// 2. Client k draws a unit direction u_k and sets mu_k = gamma u_k.
// 3. Client k draws per-coordinate variances uniformly from [0.8, 1.2] and
//    samples a ~ N(mu_k, diag(variances)).
// 4. b = a^T w* + noise_std * z.
// A uniformly random test_fraction of all samples is then held out globally;
// the remaining rows stay with their clients in generation order.
//
// With dp_normalize every sample (a, b) is divided by max(1, ||a||, |b|),
// which enforces ||a|| <= 1 and |b| <= 1 while keeping b linear in a.
absl::StatusOr<SynthData> Generate(const SynthSpec& spec);

// Divides each sample by max(1, ||a||, |b|) and sets dp_normalized.
void DpNormalize(ClientDataset& data);

// Binary dataset file:
//   "SFDS" | u32 version (1) | u32 K | u32 d | u64 n_k x K |
//   per client: n_k x d features row-major, then n_k targets.
// All integers and float64 values little-endian.
absl::Status SaveDatasets(const std::string& path,
                          std::span<const ClientDataset> clients);
absl::StatusOr<std::vector<ClientDataset>> LoadDatasets(const std::string& path);

}  // namespace fedridge

#endif  // FEDRIDGE_DATAGEN_H_
