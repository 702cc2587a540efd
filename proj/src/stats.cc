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

#include "fedridge/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "Eigen/Cholesky"
#include "Eigen/Eigenvalues"
#include "absl/strings/cord.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fedridge {
namespace {

constexpr char kLambdaMinPayload[] = "fedridge/lambda_min";

Eigen::VectorXd SymmetricEigenvalues(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

absl::Status ValidateDataset(const ClientDataset& data) {
  if (data.features.rows() != data.targets.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "client %d: feature matrix has %d rows but %d targets", data.client_id,
        data.features.rows(), data.targets.size()));
  }
  if (data.features.rows() > 0 && data.features.cols() == 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("client %d: zero feature dimension", data.client_id));
  }
  return absl::OkStatus();
}

absl::Status CheckDpBounds(const ClientDataset& data) {
  if (!data.dp_normalized) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "client %d: dataset is not flagged dp_normalized", data.client_id));
  }
  // A little slack for the rounding of the normalization itself.
  constexpr double kSlack = 1e-12;
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    if (data.features.row(i).norm() > 1.0 + kSlack) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "client %d: row %d has norm %g > 1", data.client_id, i,
          data.features.row(i).norm()));
    }
    if (std::abs(data.targets[i]) > 1.0 + kSlack) {
      return absl::FailedPreconditionError(
          absl::StrFormat("client %d: target %d has |b| = %g > 1",
                          data.client_id, i, std::abs(data.targets[i])));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ClientDataset> ConcatenateDatasets(
    std::span<const ClientDataset> parts) {
  if (parts.empty()) {
    return absl::InvalidArgumentError("no datasets to concatenate");
  }
  const int dim = parts.front().dim();
  Eigen::Index rows = 0;
  bool dp = true;
  for (const ClientDataset& part : parts) {
    if (absl::Status s = ValidateDataset(part); !s.ok()) return s;
    if (part.dim() != dim) {
      return absl::InvalidArgumentError(
          absl::StrFormat("dimension mismatch: %d vs %d", part.dim(), dim));
    }
    rows += part.num_samples();
    dp = dp && part.dp_normalized;
  }
  ClientDataset out;
  out.features.resize(rows, dim);
  out.targets.resize(rows);
  out.client_id = -1;
  out.dp_normalized = dp;
  Eigen::Index offset = 0;
  for (const ClientDataset& part : parts) {
    out.features.middleRows(offset, part.num_samples()) = part.features;
    out.targets.segment(offset, part.num_samples()) = part.targets;
    offset += part.num_samples();
  }
  return out;
}

SufficientStats::SufficientStats(int dim, int client_id)
    : dim_(dim),
      client_id_(client_id),
      gram_(PackedSize(dim), 0.0),
      moment_(Eigen::VectorXd::Zero(dim)) {}

absl::StatusOr<SufficientStats> SufficientStats::FromPacked(
    int dim, std::vector<double> gram, Eigen::VectorXd moment,
    int64_t sample_count, int client_id) {
  if (dim < 0 || gram.size() != PackedSize(dim) || moment.size() != dim) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "packed statistics have %d gram entries and %d moments; d = %d needs "
        "%d and %d",
        gram.size(), moment.size(), dim, PackedSize(dim), dim));
  }
  if (sample_count < 0) {
    return absl::InvalidArgumentError("negative sample count");
  }
  SufficientStats stats;
  stats.dim_ = dim;
  stats.client_id_ = client_id;
  stats.sample_count_ = sample_count;
  stats.gram_ = std::move(gram);
  stats.moment_ = std::move(moment);
  return stats;
}

Eigen::MatrixXd SufficientStats::FullGram() const {
  Eigen::MatrixXd full(dim_, dim_);
  size_t offset = 0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      full(i, j) = gram_[offset];
      full(j, i) = gram_[offset];
      ++offset;
    }
  }
  return full;
}

absl::string_view ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kExact:
      return "exact";
    case Provenance::kPrivate:
      return "private";
    case Provenance::kProjected:
      return "projected";
    case Provenance::kIterative:
      return "iterative";
  }
  return "unknown";
}

absl::StatusOr<SufficientStats> ComputeLocalStats(const ClientDataset& data) {
  if (absl::Status s = ValidateDataset(data); !s.ok()) return s;
  const int dim = data.dim();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  if (data.num_samples() > 0) {
    gram.selfadjointView<Eigen::Upper>().rankUpdate(data.features.transpose());
  }
  std::vector<double> packed(SufficientStats::PackedSize(dim));
  size_t offset = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) packed[offset++] = gram(i, j);
  }
  Eigen::VectorXd moment = data.features.transpose() * data.targets;
  return SufficientStats::FromPacked(dim, std::move(packed), std::move(moment),
                                     data.num_samples(), data.client_id);
}

absl::StatusOr<SufficientStats> MergeStats(
    std::span<const SufficientStats> parts, int dim) {
  std::vector<const SufficientStats*> ordered;
  ordered.reserve(parts.size());
  for (const SufficientStats& part : parts) {
    if (part.dim() != dim) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "client %d: statistics have dimension %d, expected %d",
          part.client_id(), part.dim(), dim));
    }
    ordered.push_back(&part);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SufficientStats* a, const SufficientStats* b) {
                     return a->client_id() < b->client_id();
                   });

  std::vector<double> gram(SufficientStats::PackedSize(dim), 0.0);
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(dim);
  int64_t count = 0;
  for (const SufficientStats* part : ordered) {
    const std::vector<double>& src = part->packed_gram();
    for (size_t i = 0; i < gram.size(); ++i) gram[i] += src[i];
    moment += part->moment();
    count += part->sample_count();
  }
  return SufficientStats::FromPacked(dim, std::move(gram), std::move(moment),
                                     count);
}

absl::StatusOr<SufficientStats> SubtractStats(const SufficientStats& total,
                                              const SufficientStats& part) {
  if (total.dim() != part.dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot subtract d=%d statistics from d=%d", part.dim(), total.dim()));
  }
  std::vector<double> gram = total.packed_gram();
  const std::vector<double>& src = part.packed_gram();
  for (size_t i = 0; i < gram.size(); ++i) gram[i] -= src[i];
  return SufficientStats::FromPacked(
      total.dim(), std::move(gram), total.moment() - part.moment(),
      std::max<int64_t>(0, total.sample_count() - part.sample_count()));
}

absl::StatusOr<RidgeModel> RidgeSolve(const SufficientStats& stats,
                                      double sigma, Provenance provenance) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sigma must be positive and finite, got %g", sigma));
  }
  Eigen::MatrixXd system = stats.FullGram();
  system.diagonal().array() += sigma;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    const double lambda_min = SymmetricEigenvalues(system)(0);
    absl::Status status = absl::FailedPreconditionError(absl::StrFormat(
        "G + sigma I is not positive definite (lambda_min = %.6g, sigma = %g); "
        "retry with a larger sigma",
        lambda_min, sigma));
    status.SetPayload(kLambdaMinPayload,
                      absl::Cord(absl::StrFormat("%.17g", lambda_min)));
    return status;
  }
  RidgeModel model;
  model.weights = llt.solve(stats.moment());
  model.sigma = sigma;
  model.provenance = provenance;
  if (!model.weights.allFinite()) {
    return absl::InternalError("ridge solve produced non-finite weights");
  }
  return model;
}

std::optional<double> SolveFailureLambdaMin(const absl::Status& status) {
  auto payload = status.GetPayload(kLambdaMinPayload);
  if (!payload.has_value()) return std::nullopt;
  double value;
  if (!absl::SimpleAtod(std::string(*payload), &value)) return std::nullopt;
  return value;
}

double SolveResidual(const SufficientStats& stats, double sigma,
                     const Eigen::VectorXd& weights) {
  Eigen::MatrixXd system = stats.FullGram();
  system.diagonal().array() += sigma;
  return (system * weights - stats.moment()).norm();
}

Eigen::VectorXd GramEigenvalues(const SufficientStats& stats) {
  return SymmetricEigenvalues(stats.FullGram());
}

double ConditionNumber(const SufficientStats& stats, double sigma) {
  const Eigen::VectorXd eig = GramEigenvalues(stats);
  if (eig.size() == 0) return 1.0;
  return (eig(eig.size() - 1) + sigma) / (eig(0) + sigma);
}

double Coverage(const SufficientStats& stats) {
  const Eigen::VectorXd eig = GramEigenvalues(stats);
  return eig.size() == 0 ? 0.0 : eig(0);
}

double MeanSquaredError(const Eigen::VectorXd& weights,
                        const ClientDataset& data) {
  if (data.num_samples() == 0) return 0.0;
  return (data.features * weights - data.targets).squaredNorm() /
         data.num_samples();
}

absl::StatusOr<RidgeModel> CentralizedSolve(
    std::span<const ClientDataset> clients, double sigma) {
  absl::StatusOr<ClientDataset> all = ConcatenateDatasets(clients);
  if (!all.ok()) return all.status();
  absl::StatusOr<SufficientStats> stats = ComputeLocalStats(*all);
  if (!stats.ok()) return stats.status();
  return RidgeSolve(*stats, sigma);
}

}  // namespace fedridge
