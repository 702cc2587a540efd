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

#ifndef FEDRIDGE_PROJECTION_H_
#define FEDRIDGE_PROJECTION_H_

#include <cstdint>
#include <span>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "fedridge/protocol.h"
#include "fedridge/stats.h"

namespace fedridge {

struct ProjectionSpec {
  int source_dim = 0;  // d
  int target_dim = 0;  // m, 1 <= m <= d
  uint64_t seed = 0;

  bool is_identity() const { return target_dim == source_dim; }
};

absl::Status ValidateProjectionSpec(const ProjectionSpec& spec);

// The shared d x m matrix with i.i.d. N(0, 1/m) entries, drawn from
// Rng(spec.seed) in row-major order. Identical specs give bit-identical
// matrices on every client.
absl::StatusOr<Eigen::MatrixXd> ProjectionMatrix(const ProjectionSpec& spec);

// Features A_k R; targets unchanged. When m = d the input is returned as is.
absl::StatusOr<ClientDataset> ProjectDataset(const ClientDataset& data,
                                             const ProjectionSpec& spec);

// Same, with a matrix already generated from `spec`.
absl::StatusOr<ClientDataset> ProjectDataset(const ClientDataset& data,
                                             const ProjectionSpec& spec,
                                             const Eigen::MatrixXd& projection);

struct ProjectedOneShotResult {
  RidgeModel model;           // weights live in m-space
  Eigen::MatrixXd projection;  // d x m; empty on the m = d bypass
  FederationRun run;

  // R w, the d-space weight vector with x^T R w = (x^T R) w.
  Eigen::VectorXd BackProjectedWeights() const;
  // Predictions (X R) w for raw d-dimensional rows.
  Eigen::VectorXd Predict(const Eigen::MatrixXd& features) const;
};

// One-shot fusion on projected data. Uploads are metered with m in place of d.
absl::StatusOr<ProjectedOneShotResult> RunProjectedOneShot(
    std::span<const ClientDataset> clients, double sigma,
    const ProjectionSpec& spec);

// sqrt(d / m) * w_norm: the scaling term of the projection error bound with
// its constant set to one. Only meaningful for trends.
double ProjectionErrorBound(int target_dim, int source_dim, double w_norm);

}  // namespace fedridge

#endif  // FEDRIDGE_PROJECTION_H_
