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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace fedridge {
namespace {

ClientDataset MakeDataset(Eigen::MatrixXd features, Eigen::VectorXd targets,
                          int id = 1) {
  ClientDataset data;
  data.features = std::move(features);
  data.targets = std::move(targets);
  data.client_id = id;
  return data;
}

ClientDataset RandomDataset(int rows, int dim, uint64_t seed, int id = 1) {
  Eigen::MatrixXd a = oracle::RandomGaussian(rows, dim + 1, seed);
  return MakeDataset(a.leftCols(dim), a.col(dim), id);
}

SufficientStats StatsFromFull(const Eigen::MatrixXd& gram,
                              const Eigen::VectorXd& moment, int64_t n = 1) {
  const int d = static_cast<int>(gram.rows());
  std::vector<double> packed;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) packed.push_back(gram(i, j));
  }
  return *SufficientStats::FromPacked(d, packed, moment, n);
}

// Splits rows of `data` into `parts` random nonempty-or-empty pieces with
// client ids 1..parts.
std::vector<ClientDataset> RandomPartition(const ClientDataset& data, int parts,
                                           uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<std::vector<int>> rows(parts);
  for (int r = 0; r < data.num_samples(); ++r) {
    rows[engine() % parts].push_back(r);
  }
  std::vector<ClientDataset> out;
  for (int k = 0; k < parts; ++k) {
    ClientDataset part;
    part.client_id = k + 1;
    part.features.resize(static_cast<int>(rows[k].size()), data.dim());
    part.targets.resize(static_cast<int>(rows[k].size()));
    for (size_t i = 0; i < rows[k].size(); ++i) {
      part.features.row(i) = data.features.row(rows[k][i]);
      part.targets[i] = data.targets[rows[k][i]];
    }
    out.push_back(std::move(part));
  }
  return out;
}

TEST(ComputeLocalStatsTest, ZeroData) {
  auto stats = ComputeLocalStats(
      MakeDataset(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(3)));
  ASSERT_TRUE(stats.ok()) << stats.status();
  EXPECT_TRUE(stats->FullGram().isZero(0.0));
  EXPECT_TRUE(stats->moment().isZero(0.0));
  EXPECT_EQ(stats->sample_count(), 3);
}

TEST(ComputeLocalStatsTest, IdentityFeatures) {
  auto stats = ComputeLocalStats(
      MakeDataset(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 0)));
  ASSERT_TRUE(stats.ok());
  EXPECT_EQ(stats->FullGram(), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(stats->moment(), Eigen::VectorXd(Eigen::Vector2d(1, 0)));
}

TEST(ComputeLocalStatsTest, SmallMatrixMatchesTripleLoop) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 2, 3, 4, 5, 6;
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  auto stats = ComputeLocalStats(MakeDataset(a, b));
  ASSERT_TRUE(stats.ok());
  const oracle::Matrix g = oracle::Gram(oracle::ToMatrix(a), 2);
  const oracle::Vector h =
      oracle::Moment(oracle::ToMatrix(a), oracle::ToVector(b), 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_EQ(stats->gram(i, j), g[i][j]);
    EXPECT_EQ(stats->moment()[i], h[i]);
  }
  // Hand values: G = [[35, 44], [44, 56]], h = (9, 12).
  EXPECT_EQ(stats->gram(0, 1), 44.0);
  EXPECT_EQ(stats->moment()[1], 12.0);
}

TEST(ComputeLocalStatsTest, RandomMatchesTripleLoop) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const ClientDataset data = RandomDataset(40, 7, seed);
    auto stats = ComputeLocalStats(data);
    ASSERT_TRUE(stats.ok());
    const oracle::Matrix a = oracle::ToMatrix(data.features);
    const oracle::Matrix g = oracle::Gram(a, 7);
    const oracle::Vector h = oracle::Moment(a, oracle::ToVector(data.targets), 7);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) EXPECT_NEAR(stats->gram(i, j), g[i][j], 1e-10);
      EXPECT_NEAR(stats->moment()[i], h[i], 1e-10);
    }
  }
}

TEST(ComputeLocalStatsTest, IsBitReproducibleAndSymmetric) {
  const ClientDataset data = RandomDataset(100, 9, 4);
  auto first = ComputeLocalStats(data);
  auto second = ComputeLocalStats(data);
  ASSERT_TRUE(first.ok() && second.ok());
  EXPECT_EQ(first->packed_gram(), second->packed_gram());
  EXPECT_EQ(first->moment(), second->moment());
  const Eigen::MatrixXd g = first->FullGram();
  EXPECT_EQ(g, g.transpose());
  EXPECT_EQ(first->packed_gram().size(), SufficientStats::PackedSize(9));
}

TEST(ComputeLocalStatsTest, RejectsShapeMismatch) {
  auto stats = ComputeLocalStats(
      MakeDataset(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(4)));
  EXPECT_EQ(stats.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(ComputeLocalStatsTest, RealDataIsPositiveSemidefinite) {
  const ClientDataset data = RandomDataset(4, 10, 8);  // rank deficient
  auto stats = ComputeLocalStats(data);
  ASSERT_TRUE(stats.ok());
  const Eigen::VectorXd eig = GramEigenvalues(*stats);
  EXPECT_GE(eig.minCoeff(), -1e-8 * eig.maxCoeff());
}

TEST(PackedIndexTest, EnumeratesUpperTriangleRowMajor) {
  for (int d : {1, 2, 5, 13}) {
    size_t expected = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        EXPECT_EQ(SufficientStats::PackedIndex(i, j, d), expected++);
      }
    }
    EXPECT_EQ(SufficientStats::PackedSize(d), expected);
  }
}

TEST(FromPackedTest, RejectsWrongSizes) {
  EXPECT_FALSE(SufficientStats::FromPacked(3, std::vector<double>(5),
                                           Eigen::VectorXd::Zero(3), 0)
                   .ok());
  EXPECT_FALSE(SufficientStats::FromPacked(3, std::vector<double>(6),
                                           Eigen::VectorXd::Zero(2), 0)
                   .ok());
  EXPECT_FALSE(SufficientStats::FromPacked(3, std::vector<double>(6),
                                           Eigen::VectorXd::Zero(3), -1)
                   .ok());
}

TEST(MergeStatsTest, SingletonIsIdentity) {
  auto stats = ComputeLocalStats(RandomDataset(10, 3, 1));
  ASSERT_TRUE(stats.ok());
  const SufficientStats parts[] = {*stats};
  auto merged = MergeStats(parts, 3);
  ASSERT_TRUE(merged.ok());
  EXPECT_EQ(merged->packed_gram(), stats->packed_gram());
  EXPECT_EQ(merged->moment(), stats->moment());
  EXPECT_EQ(merged->sample_count(), 10);
}

TEST(MergeStatsTest, EmptyIsZero) {
  auto merged = MergeStats({}, 4);
  ASSERT_TRUE(merged.ok());
  EXPECT_EQ(merged->dim(), 4);
  EXPECT_TRUE(merged->FullGram().isZero(0.0));
  EXPECT_TRUE(merged->moment().isZero(0.0));
  EXPECT_EQ(merged->sample_count(), 0);
}

TEST(MergeStatsTest, RejectsDimensionMismatch) {
  const SufficientStats parts[] = {SufficientStats(2, 1), SufficientStats(3, 2)};
  EXPECT_EQ(MergeStats(parts, 2).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(MergeStatsTest, ThreeWayPartitionOfThirtyRows) {
  const ClientDataset data = RandomDataset(30, 5, 11);
  auto global = ComputeLocalStats(data);
  ASSERT_TRUE(global.ok());
  std::vector<SufficientStats> locals;
  for (const ClientDataset& part : RandomPartition(data, 3, 12)) {
    locals.push_back(*ComputeLocalStats(part));
  }
  auto merged = MergeStats(locals, 5);
  ASSERT_TRUE(merged.ok());
  EXPECT_EQ(merged->sample_count(), 30);
  for (size_t i = 0; i < merged->packed_gram().size(); ++i) {
    EXPECT_NEAR(merged->packed_gram()[i], global->packed_gram()[i], 1e-10);
  }
  EXPECT_LE((merged->moment() - global->moment()).cwiseAbs().maxCoeff(), 1e-10);
}

// Property: any partition into K in 1..10 parts merges to the global stats.
TEST(MergeStatsTest, PartitionInvarianceProperty) {
  for (uint64_t trial = 0; trial < 30; ++trial) {
    const int parts = 1 + static_cast<int>(trial % 10);
    const ClientDataset data = RandomDataset(60, 6, 100 + trial);
    auto global = ComputeLocalStats(data);
    std::vector<SufficientStats> locals;
    for (const ClientDataset& part : RandomPartition(data, parts, trial)) {
      locals.push_back(*ComputeLocalStats(part));
    }
    auto merged = MergeStats(locals, 6);
    ASSERT_TRUE(merged.ok());
    for (size_t i = 0; i < merged->packed_gram().size(); ++i) {
      ASSERT_NEAR(merged->packed_gram()[i], global->packed_gram()[i], 1e-10);
    }
  }
}

TEST(MergeStatsTest, OrderOfInputDoesNotChangeBits) {
  const ClientDataset data = RandomDataset(80, 4, 21);
  std::vector<SufficientStats> locals;
  for (const ClientDataset& part : RandomPartition(data, 6, 22)) {
    locals.push_back(*ComputeLocalStats(part));
  }
  auto forward = MergeStats(locals, 4);
  std::reverse(locals.begin(), locals.end());
  auto backward = MergeStats(locals, 4);
  ASSERT_TRUE(forward.ok() && backward.ok());
  EXPECT_EQ(forward->packed_gram(), backward->packed_gram());
  EXPECT_EQ(forward->moment(), backward->moment());
}

TEST(SubtractStatsTest, UndoesMerge) {
  const ClientDataset data = RandomDataset(50, 4, 31);
  std::vector<SufficientStats> locals;
  for (const ClientDataset& part : RandomPartition(data, 4, 32)) {
    locals.push_back(*ComputeLocalStats(part));
  }
  auto total = MergeStats(locals, 4);
  auto rest = MergeStats(std::span(locals).subspan(1), 4);
  auto diff = SubtractStats(*total, locals[0]);
  ASSERT_TRUE(diff.ok());
  for (size_t i = 0; i < diff->packed_gram().size(); ++i) {
    EXPECT_NEAR(diff->packed_gram()[i], rest->packed_gram()[i], 1e-10);
  }
  EXPECT_EQ(diff->sample_count(), rest->sample_count());
}

TEST(RidgeSolveTest, ZeroData) {
  auto model = RidgeSolve(SufficientStats(2), 1.0);
  ASSERT_TRUE(model.ok());
  EXPECT_TRUE(model->weights.isZero(0.0));
}

TEST(RidgeSolveTest, IdentityGramHalvesMoment) {
  auto model = RidgeSolve(
      StatsFromFull(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 2)), 1.0);
  ASSERT_TRUE(model.ok());
  EXPECT_DOUBLE_EQ(model->weights[0], 0.5);
  EXPECT_DOUBLE_EQ(model->weights[1], 1.0);
  EXPECT_EQ(model->provenance, Provenance::kExact);
  EXPECT_EQ(model->sigma, 1.0);
}

TEST(RidgeSolveTest, RandomPsdMatchesExplicitInverse) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd a = oracle::RandomGaussian(6, 4, seed);
    const Eigen::MatrixXd g = a.transpose() * a;
    const Eigen::VectorXd h = oracle::RandomGaussian(4, 1, seed + 1000).col(0);
    auto model = RidgeSolve(StatsFromFull(g, h), 0.01);
    ASSERT_TRUE(model.ok());
    const oracle::Vector expected =
        oracle::RidgeByInverse(oracle::ToMatrix(g), oracle::ToVector(h), 0.01);
    EXPECT_LE(oracle::MaxAbsDiff(expected, model->weights), 1e-10);
  }
}

TEST(RidgeSolveTest, ResidualCertificate) {
  for (double sigma : {1e-4, 1e-2, 1.0}) {
    auto stats = ComputeLocalStats(RandomDataset(200, 20, 5));
    auto model = RidgeSolve(*stats, sigma);
    ASSERT_TRUE(model.ok());
    EXPECT_LE(SolveResidual(*stats, sigma, model->weights),
              1e-8 * (stats->moment().norm() + 1.0));
  }
}

TEST(RidgeSolveTest, RejectsNonPositiveSigma) {
  EXPECT_EQ(RidgeSolve(SufficientStats(2), 0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(RidgeSolve(SufficientStats(2), -1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(RidgeSolveTest, IndefiniteSystemReportsLambdaMin) {
  Eigen::MatrixXd g(2, 2);
  g << 1, 0, 0, -3;
  auto model = RidgeSolve(StatsFromFull(g, Eigen::Vector2d(1, 1)), 1.0,
                          Provenance::kPrivate);
  ASSERT_EQ(model.status().code(), absl::StatusCode::kFailedPrecondition);
  const std::optional<double> lambda_min = SolveFailureLambdaMin(model.status());
  ASSERT_TRUE(lambda_min.has_value());
  EXPECT_NEAR(*lambda_min, -2.0, 1e-12);
  // A larger sigma rescues the same statistics.
  EXPECT_TRUE(RidgeSolve(StatsFromFull(g, Eigen::Vector2d(1, 1)), 4.0).ok());
  EXPECT_FALSE(SolveFailureLambdaMin(absl::OkStatus()).has_value());
}

TEST(ConditionNumberTest, HandExamples) {
  EXPECT_DOUBLE_EQ(ConditionNumber(StatsFromFull(Eigen::Vector2d(0, 4).asDiagonal().toDenseMatrix(),
                                                 Eigen::Vector2d::Zero()),
                                   1.0),
                   5.0);
  for (double sigma : {1e-3, 1.0, 10.0}) {
    EXPECT_DOUBLE_EQ(ConditionNumber(StatsFromFull(Eigen::MatrixXd::Identity(3, 3),
                                                   Eigen::Vector3d::Zero()),
                                     sigma),
                     1.0);
  }
}

TEST(ConditionNumberTest, MatchesJacobiEigenvalues) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto stats = ComputeLocalStats(RandomDataset(15, 6, 50 + seed));
    const oracle::Vector eig =
        oracle::SymmetricEigenvalues(oracle::ToMatrix(stats->FullGram()));
    const double expected = (eig.back() + 0.01) / (eig.front() + 0.01);
    EXPECT_NEAR(ConditionNumber(*stats, 0.01), expected, 1e-8 * expected);
  }
}

// Property: kappa(G + sigma I) is nonincreasing in sigma and bounded by
// (lambda_max + sigma) / sigma.
TEST(ConditionNumberTest, MonotoneInSigma) {
  auto stats = ComputeLocalStats(RandomDataset(8, 12, 3));  // singular G
  const double lambda_max = GramEigenvalues(*stats).maxCoeff();
  double previous = std::numeric_limits<double>::infinity();
  for (double sigma = 1e-6; sigma < 1e3; sigma *= 3) {
    const double kappa = ConditionNumber(*stats, sigma);
    EXPECT_LE(kappa, previous * (1 + 1e-12));
    // The zero eigenvalues of G are only known to about eps * lambda_max.
    const double floor = 64 * std::numeric_limits<double>::epsilon() * lambda_max;
    EXPECT_LE(kappa, (lambda_max + sigma) / (sigma - floor));
    previous = kappa;
  }
}

TEST(CoverageTest, HandExamples) {
  EXPECT_DOUBLE_EQ(Coverage(StatsFromFull(Eigen::MatrixXd::Identity(3, 3),
                                          Eigen::Vector3d::Zero())),
                   1.0);
  EXPECT_NEAR(Coverage(StatsFromFull(Eigen::Vector2d(0, 3).asDiagonal().toDenseMatrix(),
                                     Eigen::Vector2d::Zero())),
              0.0, 1e-15);
}

TEST(CoverageTest, MatchesJacobiEigenvalues) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto stats = ComputeLocalStats(RandomDataset(30, 5, 70 + seed));
    const oracle::Vector eig =
        oracle::SymmetricEigenvalues(oracle::ToMatrix(stats->FullGram()));
    EXPECT_NEAR(Coverage(*stats), eig.front(), 1e-9 * eig.back());
  }
}

// Property: the fused solution depends only on the pooled rows, so moving rows
// between clients never changes it.
TEST(ExactRecoveryTest, RelabelingRowsDoesNotChangeSolution) {
  const ClientDataset data = RandomDataset(120, 8, 90);
  for (double sigma : {1e-4, 1e-2, 1.0}) {
    auto global = RidgeSolve(*ComputeLocalStats(data), sigma);
    for (uint64_t seed = 0; seed < 5; ++seed) {
      std::vector<SufficientStats> locals;
      for (const ClientDataset& part : RandomPartition(data, 5, seed)) {
        locals.push_back(*ComputeLocalStats(part));
      }
      auto fused = RidgeSolve(*MergeStats(locals, 8), sigma);
      ASSERT_TRUE(fused.ok());
      EXPECT_LE((fused->weights - global->weights).lpNorm<Eigen::Infinity>(),
                1e-10);
    }
  }
}

TEST(DatasetTest, ConcatenateStacksRowsInOrder) {
  const ClientDataset a = RandomDataset(3, 2, 1, 1);
  const ClientDataset b = RandomDataset(4, 2, 2, 2);
  const ClientDataset parts[] = {a, b};
  auto both = ConcatenateDatasets(parts);
  ASSERT_TRUE(both.ok());
  EXPECT_EQ(both->num_samples(), 7);
  EXPECT_EQ(both->features.topRows(3), a.features);
  EXPECT_EQ(both->targets.tail(4), b.targets);
  const ClientDataset mismatched[] = {a, RandomDataset(3, 5, 3)};
  EXPECT_FALSE(ConcatenateDatasets(mismatched).ok());
  EXPECT_FALSE(ConcatenateDatasets({}).ok());
}

TEST(DatasetTest, DpBoundsAreChecked) {
  ClientDataset data = MakeDataset(Eigen::MatrixXd::Constant(2, 2, 0.5),
                                   Eigen::Vector2d(0.5, -1.0));
  data.dp_normalized = true;
  EXPECT_TRUE(CheckDpBounds(data).ok());
  data.features(0, 0) = 2.0;
  EXPECT_EQ(CheckDpBounds(data).code(), absl::StatusCode::kFailedPrecondition);
  data.features(0, 0) = 0.5;
  data.targets[0] = 1.5;
  EXPECT_FALSE(CheckDpBounds(data).ok());
  data.targets[0] = 0.0;
  data.dp_normalized = false;
  EXPECT_FALSE(CheckDpBounds(data).ok());
}

TEST(MeanSquaredErrorTest, HandValue) {
  const ClientDataset data =
      MakeDataset(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 3));
  EXPECT_DOUBLE_EQ(MeanSquaredError(Eigen::Vector2d(0, 1), data), (1 + 4) / 2.0);
}

TEST(ProvenanceTest, Names) {
  EXPECT_EQ(ProvenanceName(Provenance::kExact), "exact");
  EXPECT_EQ(ProvenanceName(Provenance::kPrivate), "private");
  EXPECT_EQ(ProvenanceName(Provenance::kProjected), "projected");
  EXPECT_EQ(ProvenanceName(Provenance::kIterative), "iterative");
}

}  // namespace
}  // namespace fedridge
