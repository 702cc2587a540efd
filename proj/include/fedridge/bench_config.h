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

#ifndef FEDRIDGE_BENCH_CONFIG_H_
#define FEDRIDGE_BENCH_CONFIG_H_

#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "fedridge/bench.h"

namespace fedridge {

// Experiment files are INI-style key = value text. Recognized sections:
//
//   [experiment]  scenario, methods, sigma, trials, base_seed, diagnostics,
//                 record_timing
//   [data]        clients, samples_per_client, dim, gamma, noise_std,
//                 test_fraction, dp_normalize, seed
//   [iterative]   learning_rate, local_epochs, rounds (list), proximal_mu,
//                 batch_size, clients_per_round, loss_scaling
//   [heterogeneity] gammas         [communication] dims
//   [privacy]     epsilons, delta   [scalability] clients, sampling_threshold,
//                                                 sampled_clients
//   [projection]  target_dims
//
// Values start from DefaultConfig(scenario); only given keys override it.
// Unknown sections or keys are errors. Lists are comma separated.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);

// Reads only the [data] section (for dataset generation).
absl::StatusOr<SynthSpec> ParseSynthSpec(absl::string_view text);
absl::StatusOr<SynthSpec> LoadSynthSpec(const std::string& path);

absl::StatusOr<std::vector<double>> ParseDoubleList(absl::string_view text);
absl::StatusOr<std::vector<int>> ParseIntList(absl::string_view text);

}  // namespace fedridge

#endif  // FEDRIDGE_BENCH_CONFIG_H_
