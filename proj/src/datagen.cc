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

#include "fedridge/datagen.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <utility>

#include "absl/strings/str_format.h"
#include "fedridge/random.h"

namespace fedridge {
namespace {

constexpr char kMagic[4] = {'S', 'F', 'D', 'S'};
constexpr uint32_t kVersion = 1;

enum Stream : uint64_t { kWeights = 1, kClient = 2, kSplit = 3 };

Eigen::VectorXd UnitNormal(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.Normal();
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

template <typename T>
void PutLe(std::string& out, T value) {
  uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof(T));
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }
}

template <typename T>
bool GetLe(const std::string& in, size_t& pos, T& value) {
  if (pos + sizeof(T) > in.size()) return false;
  uint64_t bits = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<uint64_t>(static_cast<unsigned char>(in[pos + i]))
            << (8 * i);
  }
  pos += sizeof(T);
  std::memcpy(&value, &bits, sizeof(T));
  return true;
}

}  // namespace

absl::Status ValidateSynthSpec(const SynthSpec& spec) {
  if (spec.num_clients < 1 || spec.samples_per_client < 0 || spec.dim < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need K >= 1, n_k >= 0, d >= 1 (got K = %d, n_k = %d, d = %d)",
        spec.num_clients, spec.samples_per_client, spec.dim));
  }
  if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must lie in [0, 1], got %g", spec.gamma));
  }
  if (!(spec.noise_std >= 0.0)) {
    return absl::InvalidArgumentError("noise_std must be >= 0");
  }
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "test_fraction must lie in (0, 1), got %g", spec.test_fraction));
  }
  return absl::OkStatus();
}

void DpNormalize(ClientDataset& data) {
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    const double scale = std::max(
        {1.0, data.features.row(i).norm(), std::abs(data.targets[i])});
    if (scale > 1.0) {
      data.features.row(i) /= scale;
      data.targets[i] /= scale;
    }
  }
  data.dp_normalized = true;
}

absl::StatusOr<SynthData> Generate(const SynthSpec& spec) {
  if (absl::Status s = ValidateSynthSpec(spec); !s.ok()) return s;
  const int dim = spec.dim;
  const int per_client = spec.samples_per_client;

  SynthData out;
  Rng weight_rng(MixSeed(spec.seed, kWeights));
  out.true_weights = UnitNormal(weight_rng, dim);

  std::vector<Eigen::MatrixXd> features(spec.num_clients);
  std::vector<Eigen::VectorXd> targets(spec.num_clients);
  for (int k = 0; k < spec.num_clients; ++k) {
    Rng rng(MixSeed(spec.seed, kClient, static_cast<uint64_t>(k)));
    const Eigen::VectorXd mean = spec.gamma * UnitNormal(rng, dim);
    Eigen::VectorXd stddev(dim);
    for (int j = 0; j < dim; ++j) stddev[j] = std::sqrt(rng.Uniform(0.8, 1.2));
    Eigen::MatrixXd a(per_client, dim);
    Eigen::VectorXd b(per_client);
    for (int i = 0; i < per_client; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = mean[j] + stddev[j] * rng.Normal();
      b[i] = a.row(i).dot(out.true_weights) + spec.noise_std * rng.Normal();
    }
    features[k] = std::move(a);
    targets[k] = std::move(b);
  }

  // Global holdout over the client-major sample index.
  const int64_t total = static_cast<int64_t>(spec.num_clients) * per_client;
  const int64_t test_count =
      std::llround(spec.test_fraction * static_cast<double>(total));
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(MixSeed(spec.seed, kSplit));
  split_rng.Shuffle(order);
  std::vector<char> is_test(total, 0);
  for (int64_t i = 0; i < test_count; ++i) is_test[order[i]] = 1;

  out.test_set.client_id = 0;
  out.test_set.features.resize(test_count, dim);
  out.test_set.targets.resize(test_count);
  int64_t test_row = 0;
  for (int k = 0; k < spec.num_clients; ++k) {
    int train_rows = 0;
    for (int i = 0; i < per_client; ++i) {
      if (!is_test[static_cast<int64_t>(k) * per_client + i]) ++train_rows;
    }
    ClientDataset client;
    client.client_id = k + 1;
    client.features.resize(train_rows, dim);
    client.targets.resize(train_rows);
    int row = 0;
    for (int i = 0; i < per_client; ++i) {
      if (is_test[static_cast<int64_t>(k) * per_client + i]) {
        out.test_set.features.row(test_row) = features[k].row(i);
        out.test_set.targets[test_row] = targets[k][i];
        ++test_row;
      } else {
        client.features.row(row) = features[k].row(i);
        client.targets[row] = targets[k][i];
        ++row;
      }
    }
    features[k].resize(0, 0);
    out.clients.push_back(std::move(client));
  }

  if (spec.dp_normalize) {
    for (ClientDataset& client : out.clients) DpNormalize(client);
    DpNormalize(out.test_set);
  }
  return out;
}

absl::Status SaveDatasets(const std::string& path,
                          std::span<const ClientDataset> clients) {
  const int dim = clients.empty() ? 0 : clients.front().dim();
  std::string buffer(kMagic, sizeof(kMagic));
  PutLe<uint32_t>(buffer, kVersion);
  PutLe<uint32_t>(buffer, static_cast<uint32_t>(clients.size()));
  PutLe<uint32_t>(buffer, static_cast<uint32_t>(dim));
  for (const ClientDataset& client : clients) {
    if (absl::Status s = ValidateDataset(client); !s.ok()) return s;
    if (client.dim() != dim && client.num_samples() > 0) {
      return absl::InvalidArgumentError("clients disagree on dimension");
    }
    PutLe<uint64_t>(buffer, static_cast<uint64_t>(client.num_samples()));
  }
  for (const ClientDataset& client : clients) {
    for (int i = 0; i < client.num_samples(); ++i) {
      for (int j = 0; j < dim; ++j) PutLe<double>(buffer, client.features(i, j));
    }
    for (int i = 0; i < client.num_samples(); ++i) {
      PutLe<double>(buffer, client.targets[i]);
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(absl::StrFormat("cannot open %s", path));
  }
  file.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!file) {
    return absl::UnavailableError(absl::StrFormat("write to %s failed", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<ClientDataset>> LoadDatasets(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  }
  const std::string buffer((std::istreambuf_iterator<char>(file)),
                           std::istreambuf_iterator<char>());
  if (buffer.size() < 4 || buffer.compare(0, 4, kMagic, 4) != 0) {
    return absl::DataLossError(absl::StrFormat("%s: bad magic", path));
  }
  size_t pos = 4;
  uint32_t version = 0, num_clients = 0, dim = 0;
  if (!GetLe(buffer, pos, version) || !GetLe(buffer, pos, num_clients) ||
      !GetLe(buffer, pos, dim)) {
    return absl::DataLossError(absl::StrFormat("%s: truncated header", path));
  }
  if (version != kVersion) {
    return absl::DataLossError(
        absl::StrFormat("%s: unsupported version %d", path, version));
  }
  std::vector<uint64_t> sizes(num_clients);
  for (uint64_t& n : sizes) {
    if (!GetLe(buffer, pos, n)) {
      return absl::DataLossError(absl::StrFormat("%s: truncated header", path));
    }
  }
  std::vector<ClientDataset> clients(num_clients);
  for (uint32_t k = 0; k < num_clients; ++k) {
    ClientDataset& client = clients[k];
    client.client_id = static_cast<int>(k) + 1;
    const auto n = static_cast<Eigen::Index>(sizes[k]);
    client.features.resize(n, dim);
    client.targets.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (uint32_t j = 0; j < dim; ++j) {
        if (!GetLe(buffer, pos, client.features(i, j))) {
          return absl::DataLossError(absl::StrFormat("%s: truncated body", path));
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!GetLe(buffer, pos, client.targets[i])) {
        return absl::DataLossError(absl::StrFormat("%s: truncated body", path));
      }
    }
    client.dp_normalized = true;
    client.dp_normalized = CheckDpBounds(client).ok();
  }
  if (pos != buffer.size()) {
    return absl::DataLossError(absl::StrFormat("%s: trailing bytes", path));
  }
  return clients;
}

}  // namespace fedridge
