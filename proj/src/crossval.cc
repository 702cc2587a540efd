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

#include "fedridge/crossval.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/strings/str_format.h"
#include "fedridge/protocol.h"

namespace fedridge {

absl::StatusOr<CvReport> FederatedLocoCv(
    std::span<const SufficientStats> stats_by_client,
    std::span<const ClientDataset> clients, std::span<const double> sigma_grid) {
  const size_t num_clients = clients.size();
  if (num_clients < 2) {
    return absl::InvalidArgumentError(
        "leave-one-client-out needs at least two clients");
  }
  if (stats_by_client.size() != num_clients) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d statistics for %d clients", stats_by_client.size(),
                        num_clients));
  }
  if (sigma_grid.empty()) return absl::InvalidArgumentError("empty sigma grid");
  for (double sigma : sigma_grid) {
    if (!(sigma > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sigma grid entry %g is not positive", sigma));
    }
  }
  for (size_t i = 0; i < num_clients; ++i) {
    if (stats_by_client[i].client_id() != clients[i].client_id) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "statistics %d belong to client %d, dataset to client %d", i,
          stats_by_client[i].client_id(), clients[i].client_id));
    }
  }

  // Rows are processed in ascending client id so that the loss sums, and
  // hence sigma*, do not depend on the order of the inputs.
  std::vector<size_t> order(num_clients);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return clients[a].client_id < clients[b].client_id;
  });

  const int dim = stats_by_client.front().dim();
  absl::StatusOr<SufficientStats> total = MergeStats(stats_by_client, dim);
  if (!total.ok()) return total.status();

  CvReport report;
  report.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
  report.per_client_losses.resize(num_clients, sigma_grid.size());
  report.held_out_weights.resize(num_clients);
  for (size_t row = 0; row < num_clients; ++row) {
    const size_t k = order[row];
    report.client_ids.push_back(clients[k].client_id);
    absl::StatusOr<SufficientStats> rest =
        SubtractStats(*total, stats_by_client[k]);
    if (!rest.ok()) return rest.status();
    for (size_t s = 0; s < sigma_grid.size(); ++s) {
      absl::StatusOr<RidgeModel> model = RidgeSolve(*rest, sigma_grid[s]);
      if (!model.ok()) return model.status();
      report.per_client_losses(row, s) =
          MeanSquaredError(model->weights, clients[k]);
      report.held_out_weights[row].push_back(std::move(model->weights));
    }
  }

  report.total_losses.resize(sigma_grid.size());
  size_t best = 0;
  for (size_t s = 0; s < sigma_grid.size(); ++s) {
    double sum = 0.0;
    for (size_t row = 0; row < num_clients; ++row) {
      sum += report.per_client_losses(row, s);
    }
    report.total_losses[s] = sum;
    const double best_loss = report.total_losses[best];
    if (sum < best_loss ||
        (sum == best_loss && sigma_grid[s] > sigma_grid[best])) {
      best = s;
    }
  }
  report.selected_sigma = sigma_grid[best];
  report.overhead_scalars =
      static_cast<int64_t>(num_clients * sigma_grid.size());
  report.overhead_bytes = kBytesPerScalar * report.overhead_scalars;
  return report;
}

}  // namespace fedridge
