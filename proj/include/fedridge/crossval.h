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

#ifndef FEDRIDGE_CROSSVAL_H_
#define FEDRIDGE_CROSSVAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "fedridge/stats.h"

namespace fedridge {

struct CvReport {
  std::vector<double> sigma_grid;
  std::vector<int> client_ids;  // row order of the tables below, ascending
  // per_client_losses(k, s): MSE of w_{-k}(sigma_s) on client k's data.
  Eigen::MatrixXd per_client_losses;
  // held_out_weights[k][s] = w_{-k}(sigma_s).
  std::vector<std::vector<Eigen::VectorXd>> held_out_weights;
  std::vector<double> total_losses;  // column sums
  double selected_sigma = 0.0;
  // One reported loss per (client, sigma).
  int64_t overhead_scalars = 0;
  int64_t overhead_bytes = 0;
};

// Leave-one-client-out cross-validation on the server. w_{-k} is solved from
// the aggregate minus client k's statistics; client k reports its MSE on its
// own data. sigma* minimizes the summed loss, ties going to the larger sigma.
// `stats_by_client[i]` must belong to `clients[i]`.
absl::StatusOr<CvReport> FederatedLocoCv(
    std::span<const SufficientStats> stats_by_client,
    std::span<const ClientDataset> clients, std::span<const double> sigma_grid);

}  // namespace fedridge

#endif  // FEDRIDGE_CROSSVAL_H_
