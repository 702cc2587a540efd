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

#ifndef FEDRIDGE_PRIVACY_H_
#define FEDRIDGE_PRIVACY_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "fedridge/protocol.h"
#include "fedridge/stats.h"

namespace fedridge {

// (epsilon, delta) budget and the Gaussian noise scale derived from it. Both
// the Gram matrix and the moment vector have unit l2 sensitivity under the
// dp_normalized bounds, so one scale serves both.
struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 1e-5;
  double tau = 0.0;
};

// tau = sqrt(2 ln(1.25 / delta)) / epsilon. epsilon = +inf gives tau = 0.
absl::StatusOr<double> NoiseScale(double epsilon, double delta);
absl::StatusOr<PrivacyParams> MakePrivacyParams(double epsilon, double delta);

struct NoisedStats {
  SufficientStats stats;
  uint64_t noise_seed = 0;
  PrivacyParams privacy;
};

// Adds independent N(0, tau^2) noise to every upper-triangle Gram entry
// (diagonal included; the lower triangle mirrors it) and to every moment
// entry. Draw order: packed Gram entries in row-major upper-triangle order,
// then the moment vector, all from Rng(seed). The result is symmetric but may
// be indefinite.
//
// Fails unless the source data was dp_normalized, since the noise scale is
// only calibrated for unit sensitivity.
absl::StatusOr<NoisedStats> PrivatizeStats(const SufficientStats& stats,
                                           const PrivacyParams& params,
                                           uint64_t seed,
                                           bool source_dp_normalized);

// Checks the data bounds, computes the client's statistics and privatizes.
absl::StatusOr<NoisedStats> PrivatizeClient(const ClientDataset& data,
                                            const PrivacyParams& params,
                                            uint64_t seed);

// Private one-shot fusion. Client k noises with seed `seed + client_id`. A
// noised system that is not positive definite surfaces the RidgeSolve error.
absl::StatusOr<OneShotResult> PrivateOneShot(
    std::span<const ClientDataset> clients, double sigma,
    const PrivacyParams& params, uint64_t seed);

// Advanced-composition loss of R rounds at (epsilon0, delta0) each:
// sqrt(2 R ln(1/delta0)) epsilon0 + R epsilon0 (e^epsilon0 - 1).
absl::StatusOr<double> IterativePrivacyLoss(int rounds, double epsilon0,
                                            double delta0);

}  // namespace fedridge

#endif  // FEDRIDGE_PRIVACY_H_
