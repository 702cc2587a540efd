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

#include "fedridge/privacy.h"

#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/str_format.h"
#include "fedridge/random.h"

namespace fedridge {
namespace {

absl::Status CheckBudget(double epsilon, double delta) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> NoiseScale(double epsilon, double delta) {
  if (absl::Status s = CheckBudget(epsilon, delta); !s.ok()) return s;
  return std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

absl::StatusOr<PrivacyParams> MakePrivacyParams(double epsilon, double delta) {
  absl::StatusOr<double> tau = NoiseScale(epsilon, delta);
  if (!tau.ok()) return tau.status();
  return PrivacyParams{epsilon, delta, *tau};
}

absl::StatusOr<NoisedStats> PrivatizeStats(const SufficientStats& stats,
                                           const PrivacyParams& params,
                                           uint64_t seed,
                                           bool source_dp_normalized) {
  if (!source_dp_normalized) {
    return absl::FailedPreconditionError(
        "statistics come from data that is not dp_normalized; the unit "
        "sensitivity bound does not hold");
  }
  if (!(params.tau >= 0.0) || !std::isfinite(params.tau)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid noise scale %g", params.tau));
  }
  std::vector<double> gram = stats.packed_gram();
  Eigen::VectorXd moment = stats.moment();
  if (params.tau > 0.0) {
    Rng rng(seed);
    for (double& entry : gram) entry += params.tau * rng.Normal();
    for (Eigen::Index i = 0; i < moment.size(); ++i) {
      moment[i] += params.tau * rng.Normal();
    }
  }
  absl::StatusOr<SufficientStats> noised = SufficientStats::FromPacked(
      stats.dim(), std::move(gram), std::move(moment), stats.sample_count(),
      stats.client_id());
  if (!noised.ok()) return noised.status();
  return NoisedStats{*std::move(noised), seed, params};
}

absl::StatusOr<NoisedStats> PrivatizeClient(const ClientDataset& data,
                                            const PrivacyParams& params,
                                            uint64_t seed) {
  if (absl::Status s = CheckDpBounds(data); !s.ok()) return s;
  absl::StatusOr<SufficientStats> stats = ComputeLocalStats(data);
  if (!stats.ok()) return stats.status();
  return PrivatizeStats(*stats, params, seed, /*source_dp_normalized=*/true);
}

absl::StatusOr<OneShotResult> PrivateOneShot(
    std::span<const ClientDataset> clients, double sigma,
    const PrivacyParams& params, uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SufficientStats> uploads;
  uploads.reserve(clients.size());
  for (const ClientDataset& client : clients) {
    absl::StatusOr<NoisedStats> noised = PrivatizeClient(
        client, params, seed + static_cast<uint64_t>(client.client_id));
    if (!noised.ok()) return noised.status();
    uploads.push_back(std::move(noised->stats));
  }
  absl::StatusOr<OneShotResult> result =
      FuseAndSolve(uploads, sigma, Provenance::kPrivate);
  if (!result.ok()) return result.status();
  result->run.privatization_events = 1;
  result->run.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

absl::StatusOr<double> IterativePrivacyLoss(int rounds, double epsilon0,
                                            double delta0) {
  if (rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rounds must be >= 1, got %d", rounds));
  }
  if (absl::Status s = CheckBudget(epsilon0, delta0); !s.ok()) return s;
  const double r = rounds;
  return std::sqrt(2.0 * r * std::log(1.0 / delta0)) * epsilon0 +
         r * epsilon0 * std::expm1(epsilon0);
}

}  // namespace fedridge
