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

#include "fedridge/projection.h"

#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/str_format.h"
#include "fedridge/random.h"

namespace fedridge {

absl::Status ValidateProjectionSpec(const ProjectionSpec& spec) {
  if (spec.target_dim < 1 || spec.target_dim > spec.source_dim) {
    return absl::InvalidArgumentError(
        absl::StrFormat("projection needs 1 <= m <= d, got m = %d, d = %d",
                        spec.target_dim, spec.source_dim));
  }
  return absl::OkStatus();
}

absl::StatusOr<Eigen::MatrixXd> ProjectionMatrix(const ProjectionSpec& spec) {
  if (absl::Status s = ValidateProjectionSpec(spec); !s.ok()) return s;
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.target_dim));
  Eigen::MatrixXd projection(spec.source_dim, spec.target_dim);
  Rng rng(spec.seed);
  for (int i = 0; i < spec.source_dim; ++i) {
    for (int j = 0; j < spec.target_dim; ++j) {
      projection(i, j) = scale * rng.Normal();
    }
  }
  return projection;
}

absl::StatusOr<ClientDataset> ProjectDataset(const ClientDataset& data,
                                             const ProjectionSpec& spec,
                                             const Eigen::MatrixXd& projection) {
  if (absl::Status s = ValidateProjectionSpec(spec); !s.ok()) return s;
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  if (data.dim() != spec.source_dim) {
    return absl::InvalidArgumentError(
        absl::StrFormat("client %d has d = %d but the projection expects %d",
                        data.client_id, data.dim(), spec.source_dim));
  }
  if (spec.is_identity()) return data;
  if (projection.rows() != spec.source_dim ||
      projection.cols() != spec.target_dim) {
    return absl::InvalidArgumentError("projection matrix does not match spec");
  }
  ClientDataset out;
  out.features = data.features * projection;
  out.targets = data.targets;
  out.client_id = data.client_id;
  // Row norms are not preserved by a Gaussian projection.
  out.dp_normalized = false;
  return out;
}

absl::StatusOr<ClientDataset> ProjectDataset(const ClientDataset& data,
                                             const ProjectionSpec& spec) {
  if (absl::Status s = ValidateProjectionSpec(spec); !s.ok()) return s;
  if (spec.is_identity()) return ProjectDataset(data, spec, Eigen::MatrixXd());
  absl::StatusOr<Eigen::MatrixXd> projection = ProjectionMatrix(spec);
  if (!projection.ok()) return projection.status();
  return ProjectDataset(data, spec, *projection);
}

Eigen::VectorXd ProjectedOneShotResult::BackProjectedWeights() const {
  if (projection.size() == 0) return model.weights;
  return projection * model.weights;
}

Eigen::VectorXd ProjectedOneShotResult::Predict(
    const Eigen::MatrixXd& features) const {
  if (projection.size() == 0) return features * model.weights;
  return (features * projection) * model.weights;
}

absl::StatusOr<ProjectedOneShotResult> RunProjectedOneShot(
    std::span<const ClientDataset> clients, double sigma,
    const ProjectionSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  if (absl::Status s = ValidateProjectionSpec(spec); !s.ok()) return s;
  Eigen::MatrixXd projection;
  if (!spec.is_identity()) {
    absl::StatusOr<Eigen::MatrixXd> generated = ProjectionMatrix(spec);
    if (!generated.ok()) return generated.status();
    projection = *std::move(generated);
  }
  std::vector<SufficientStats> uploads;
  uploads.reserve(clients.size());
  for (const ClientDataset& client : clients) {
    absl::StatusOr<ClientDataset> projected =
        ProjectDataset(client, spec, projection);
    if (!projected.ok()) return projected.status();
    absl::StatusOr<SufficientStats> stats = ComputeLocalStats(*projected);
    if (!stats.ok()) return stats.status();
    uploads.push_back(*std::move(stats));
  }
  absl::StatusOr<OneShotResult> fused = FuseAndSolve(
      uploads, sigma,
      spec.is_identity() ? Provenance::kExact : Provenance::kProjected);
  if (!fused.ok()) return fused.status();

  ProjectedOneShotResult result;
  result.model = std::move(fused->model);
  result.projection = std::move(projection);
  result.run = std::move(fused->run);
  result.run.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

double ProjectionErrorBound(int target_dim, int source_dim, double w_norm) {
  return std::sqrt(static_cast<double>(source_dim) / target_dim) * w_norm;
}

}  // namespace fedridge
