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

#ifndef FEDRIDGE_STATS_H_
#define FEDRIDGE_STATS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include "absl/strings/string_view.h"
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fedridge {

// One client's local data: features A_k (n_k x d) and targets b_k (n_k).
struct ClientDataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd targets;
  int client_id = 0;
  // Set when every feature row has norm <= 1 and every |target| <= 1. Required
  // before the statistics may be privatized.
  bool dp_normalized = false;

  int num_samples() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

absl::Status ValidateDataset(const ClientDataset& data);

// Checks the bounds implied by `dp_normalized` against the actual data.
absl::Status CheckDpBounds(const ClientDataset& data);

// Stacks datasets row-wise in the order given. All must share a dimension.
absl::StatusOr<ClientDataset> ConcatenateDatasets(
    std::span<const ClientDataset> parts);

// Gram matrix G (packed upper triangle), moment vector h and sample count n.
//
// The Gram matrix is stored as d(d+1)/2 scalars in row-major upper-triangle
// order, so the lower triangle is reconstructed from the same storage and the
// matrix is symmetric bit for bit.
class SufficientStats {
 public:
  SufficientStats() = default;
  // All-zero statistics of dimension `dim`.
  explicit SufficientStats(int dim, int client_id = -1);

  static absl::StatusOr<SufficientStats> FromPacked(int dim,
                                                    std::vector<double> gram,
                                                    Eigen::VectorXd moment,
                                                    int64_t sample_count,
                                                    int client_id = -1);

  static size_t PackedSize(int dim) {
    return static_cast<size_t>(dim) * (dim + 1) / 2;
  }
  // Offset of (i, j), i <= j, in the packed upper triangle.
  static size_t PackedIndex(int i, int j, int dim) {
    return static_cast<size_t>(i) * dim - static_cast<size_t>(i) * (i - 1) / 2 +
           (j - i);
  }

  int dim() const { return dim_; }
  int client_id() const { return client_id_; }
  int64_t sample_count() const { return sample_count_; }
  const std::vector<double>& packed_gram() const { return gram_; }
  const Eigen::VectorXd& moment() const { return moment_; }

  double gram(int i, int j) const {
    return i <= j ? gram_[PackedIndex(i, j, dim_)]
                  : gram_[PackedIndex(j, i, dim_)];
  }

  // Materializes the full symmetric d x d matrix.
  Eigen::MatrixXd FullGram() const;

 private:
  int dim_ = 0;
  int client_id_ = -1;
  int64_t sample_count_ = 0;
  std::vector<double> gram_;
  Eigen::VectorXd moment_;
};

enum class Provenance { kExact, kPrivate, kProjected, kIterative };

absl::string_view ProvenanceName(Provenance provenance);

struct RidgeModel {
  Eigen::VectorXd weights;
  double sigma = 0.0;
  Provenance provenance = Provenance::kExact;
};

// G_k = A_k^T A_k, h_k = A_k^T b_k, n = n_k. Deterministic.
absl::StatusOr<SufficientStats> ComputeLocalStats(const ClientDataset& data);

// Elementwise sum of `parts`, accumulated in ascending client_id order (ties
// keep input order). An empty list yields zero statistics of dimension `dim`.
absl::StatusOr<SufficientStats> MergeStats(
    std::span<const SufficientStats> parts, int dim);

// total - part, entrywise. Used to drop one client from an aggregate.
absl::StatusOr<SufficientStats> SubtractStats(const SufficientStats& total,
                                              const SufficientStats& part);

// Solves (G + sigma I) w = h by Cholesky. When G + sigma I is not positive
// definite (only possible for noised statistics) the returned status is
// FailedPrecondition and carries lambda_min(G + sigma I); see
// SolveFailureLambdaMin.
absl::StatusOr<RidgeModel> RidgeSolve(const SufficientStats& stats,
                                      double sigma,
                                      Provenance provenance = Provenance::kExact);

// Extracts the smallest eigenvalue recorded on a RidgeSolve failure.
std::optional<double> SolveFailureLambdaMin(const absl::Status& status);

// ||(G + sigma I) w - h||_2.
double SolveResidual(const SufficientStats& stats, double sigma,
                     const Eigen::VectorXd& weights);

// (lambda_max(G) + sigma) / (lambda_min(G) + sigma).
double ConditionNumber(const SufficientStats& stats, double sigma);

// lambda_min(G); the data satisfies alpha-coverage when this is >= alpha.
double Coverage(const SufficientStats& stats);

// Ascending eigenvalues of the symmetric Gram matrix.
Eigen::VectorXd GramEigenvalues(const SufficientStats& stats);

double MeanSquaredError(const Eigen::VectorXd& weights,
                        const ClientDataset& data);

// Ridge solution on the row-concatenation of `clients`.
absl::StatusOr<RidgeModel> CentralizedSolve(
    std::span<const ClientDataset> clients, double sigma);

}  // namespace fedridge

#endif  // FEDRIDGE_STATS_H_
