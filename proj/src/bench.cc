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

#include "fedridge/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fedridge/privacy.h"
#include "fedridge/projection.h"
#include "fedridge/protocol.h"
#include "fedridge/random.h"
#include "fedridge/stats.h"
#include "json.hpp"

namespace fedridge {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::pair<Scenario, absl::string_view> kScenarioNames[] = {
    {Scenario::kMain, "main"},
    {Scenario::kHeterogeneity, "heterogeneity"},
    {Scenario::kCommunication, "communication"},
    {Scenario::kConvergence, "convergence"},
    {Scenario::kPrivacy, "privacy"},
    {Scenario::kScalability, "scalability"},
    {Scenario::kProjection, "projection"},
};

constexpr std::pair<Method, absl::string_view> kMethodNames[] = {
    {Method::kOneShot, "OneShot"},
    {Method::kFedAvg, "FedAvg"},
    {Method::kFedProx, "FedProx"},
    {Method::kCentralized, "Centralized"},
    {Method::kPrivateOneShot, "PrivateOneShot"},
    {Method::kDpFedAvg, "DpFedAvg"},
    {Method::kProjectedOneShot, "ProjectedOneShot"},
};

// Stream tags for seed derivation inside a trial.
enum SeedStream : uint64_t {
  kIterativeSeed = 0x17,
  kPrivacySeed = 0x50,
  kProjectionSeed = 0x70,
};

bool IsIterative(Method method) {
  return method == Method::kFedAvg || method == Method::kFedProx ||
         method == Method::kDpFedAvg;
}

bool Sweeps(Scenario scenario) {
  return scenario != Scenario::kMain && scenario != Scenario::kConvergence;
}

// Whether a method's result depends on the sweep value in a scenario whose
// data does not.
bool SweepDependent(Scenario scenario, Method method) {
  switch (scenario) {
    case Scenario::kPrivacy:
      return method == Method::kPrivateOneShot || method == Method::kDpFedAvg;
    case Scenario::kProjection:
      return method == Method::kProjectedOneShot;
    default:
      return false;
  }
}

// Whether the data depends on the sweep value.
bool SweepChangesData(Scenario scenario) {
  return scenario == Scenario::kHeterogeneity ||
         scenario == Scenario::kCommunication ||
         scenario == Scenario::kScalability;
}

SynthSpec DataForCell(const ExperimentConfig& config, double sweep_value,
                      int trial) {
  SynthSpec spec = config.data;
  spec.seed = MixSeed(config.base_seed, static_cast<uint64_t>(trial));
  switch (config.scenario) {
    case Scenario::kHeterogeneity:
      spec.gamma = sweep_value;
      break;
    case Scenario::kCommunication:
      spec.dim = static_cast<int>(sweep_value);
      break;
    case Scenario::kScalability:
      spec.num_clients = static_cast<int>(sweep_value);
      break;
    case Scenario::kPrivacy:
      spec.dp_normalize = true;
      break;
    default:
      break;
  }
  return spec;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

absl::StatusOr<SufficientStats> AggregateStats(
    std::span<const ClientDataset> clients) {
  std::vector<SufficientStats> parts;
  parts.reserve(clients.size());
  for (const ClientDataset& client : clients) {
    absl::StatusOr<SufficientStats> stats = ComputeLocalStats(client);
    if (!stats.ok()) return stats.status();
    parts.push_back(*std::move(stats));
  }
  return MergeStats(parts, clients.front().dim());
}

struct CellContext {
  const ExperimentConfig* config;
  const SynthData* data;
  double sweep_value;
  size_t sweep_index;
  int trial;
  uint64_t data_seed;
  // Exact weights, solved lazily for the projection error diagnostics.
  std::optional<Eigen::VectorXd> exact_weights;
};

void MarkFailed(RunRecord& record, Json& extra, const absl::Status& status) {
  record.test_mse.reset();
  extra["status"] = "failed";
  extra["error"] = std::string(status.message());
  if (std::optional<double> lambda = SolveFailureLambdaMin(status)) {
    extra["lambda_min"] = *lambda;
  }
}

void FillRun(RunRecord& record, const FederationRun& run) {
  record.rounds = run.round_count;
  record.upload_bytes = run.total_upload_bytes;
  record.download_bytes = run.total_download_bytes;
  record.wall_time_s = run.wall_time_seconds;
}

RunRecord RunCell(CellContext& cell, Method method, int rounds) {
  const ExperimentConfig& config = *cell.config;
  const SynthData& data = *cell.data;
  const std::span<const ClientDataset> clients = data.clients;
  const int dim = data.true_weights.size();

  RunRecord record;
  record.scenario = std::string(ScenarioName(config.scenario));
  record.method = std::string(MethodName(method));
  if (IsIterative(method)) absl::StrAppend(&record.method, "-", rounds);
  record.sweep_value = cell.sweep_value;
  record.trial = cell.trial;
  Json extra = Json::object();
  extra["status"] = "ok";

  switch (method) {
    case Method::kOneShot: {
      absl::StatusOr<OneShotResult> result = RunOneShot(clients, config.sigma);
      if (!result.ok()) {
        MarkFailed(record, extra, result.status());
        break;
      }
      FillRun(record, result->run);
      record.test_mse = MeanSquaredError(result->model.weights, data.test_set);
      cell.exact_weights = result->model.weights;
      if (config.diagnostics) {
        absl::StatusOr<SufficientStats> total = AggregateStats(clients);
        if (total.ok()) {
          const Eigen::VectorXd eig = GramEigenvalues(*total);
          extra["lambda_min"] = eig(0);
          extra["kappa"] =
              (eig(eig.size() - 1) + config.sigma) / (eig(0) + config.sigma);
        }
      }
      if (config.scenario == Scenario::kConvergence) {
        extra["trajectory"] = Json::array({*record.test_mse});
      }
      break;
    }
    case Method::kCentralized: {
      const auto start = Clock::now();
      absl::StatusOr<RidgeModel> model = CentralizedSolve(clients, config.sigma);
      record.wall_time_s = Seconds(start);
      if (!model.ok()) {
        MarkFailed(record, extra, model.status());
        break;
      }
      record.test_mse = MeanSquaredError(model->weights, data.test_set);
      break;
    }
    case Method::kFedAvg:
    case Method::kFedProx:
    case Method::kDpFedAvg: {
      IterativeConfig iterative = config.iterative;
      iterative.rounds = rounds;
      if (config.scenario == Scenario::kScalability &&
          static_cast<int>(clients.size()) > config.sampling_threshold) {
        iterative.clients_per_round = config.sampled_clients;
      }
      if (method == Method::kDpFedAvg) {
        if (config.scenario != Scenario::kPrivacy) {
          MarkFailed(record, extra,
                     absl::InvalidArgumentError(
                         "DpFedAvg needs the privacy scenario's epsilon grid"));
          break;
        }
        const double epsilon0 = cell.sweep_value / std::sqrt(rounds);
        iterative.dp = IterativeDp{epsilon0, config.delta, 1.0};
        extra["epsilon0"] = epsilon0;
        if (absl::StatusOr<double> total =
                IterativePrivacyLoss(rounds, epsilon0, config.delta);
            total.ok()) {
          extra["epsilon_total"] = *total;
        }
      }
      const uint64_t seed =
          MixSeed(cell.data_seed, kIterativeSeed + static_cast<int>(method),
                  static_cast<uint64_t>(rounds));
      const bool track = config.scenario == Scenario::kConvergence;
      absl::StatusOr<IterativeResult> result =
          method == Method::kFedProx
              ? RunFedProx(clients, config.sigma, iterative, seed,
                           track ? &data.test_set : nullptr)
              : RunFedAvg(clients, config.sigma, iterative, seed,
                          track ? &data.test_set : nullptr);
      if (!result.ok()) {
        record.rounds = rounds;
        MarkFailed(record, extra, result.status());
        break;
      }
      FillRun(record, result->run);
      record.test_mse = MeanSquaredError(result->model.weights, data.test_set);
      if (track) extra["trajectory"] = result->trajectory;
      break;
    }
    case Method::kPrivateOneShot: {
      if (config.scenario != Scenario::kPrivacy) {
        MarkFailed(record, extra,
                   absl::InvalidArgumentError(
                       "PrivateOneShot needs the privacy scenario's epsilon grid"));
        break;
      }
      absl::StatusOr<PrivacyParams> params =
          MakePrivacyParams(cell.sweep_value, config.delta);
      if (!params.ok()) {
        MarkFailed(record, extra, params.status());
        break;
      }
      extra["tau"] = params->tau;
      absl::StatusOr<OneShotResult> result = PrivateOneShot(
          clients, config.sigma, *params,
          MixSeed(cell.data_seed, kPrivacySeed, cell.sweep_index));
      if (!result.ok()) {
        record.rounds = 1;
        MarkFailed(record, extra, result.status());
        break;
      }
      FillRun(record, result->run);
      record.test_mse = MeanSquaredError(result->model.weights, data.test_set);
      break;
    }
    case Method::kProjectedOneShot: {
      if (config.scenario != Scenario::kProjection) {
        MarkFailed(record, extra,
                   absl::InvalidArgumentError(
                       "ProjectedOneShot needs the projection scenario's m grid"));
        break;
      }
      const int m = static_cast<int>(cell.sweep_value);
      const ProjectionSpec spec{
          dim, m,
          MixSeed(cell.data_seed, kProjectionSeed, static_cast<uint64_t>(m))};
      absl::StatusOr<ProjectedOneShotResult> result =
          RunProjectedOneShot(clients, config.sigma, spec);
      if (!result.ok()) {
        MarkFailed(record, extra, result.status());
        break;
      }
      FillRun(record, result->run);
      const Eigen::VectorXd predictions = result->Predict(data.test_set.features);
      record.test_mse =
          (predictions - data.test_set.targets).squaredNorm() /
          std::max<Eigen::Index>(1, predictions.size());
      const CommunicationCost cost = CommunicationBudget(m, OneShotVariant{});
      extra["upload_floats_per_client"] = cost.upload_floats;
      if (config.diagnostics) {
        if (!cell.exact_weights.has_value()) {
          absl::StatusOr<SufficientStats> total = AggregateStats(clients);
          if (total.ok()) {
            absl::StatusOr<RidgeModel> exact = RidgeSolve(*total, config.sigma);
            if (exact.ok()) cell.exact_weights = exact->weights;
          }
        }
        if (cell.exact_weights.has_value()) {
          const double w_norm = cell.exact_weights->norm();
          extra["relative_error"] =
              (result->BackProjectedWeights() - *cell.exact_weights).norm() /
              w_norm;
          extra["error_bound_scale"] = ProjectionErrorBound(m, dim, 1.0);
        }
      }
      break;
    }
  }

  if (record.ok() && config.scenario == Scenario::kCommunication &&
      method != Method::kCentralized) {
    const CommunicationCost cost =
        IsIterative(method)
            ? CommunicationBudget(dim, IterativeVariant{rounds})
            : CommunicationBudget(dim, OneShotVariant{});
    extra["upload_floats_per_client"] = cost.upload_floats;
    extra["download_floats_per_client"] = cost.download_floats;
  }
  if (!config.record_timing) record.wall_time_s = 0.0;
  record.extra_json = extra.dump();
  return record;
}

}  // namespace

absl::string_view ScenarioName(Scenario scenario) {
  for (const auto& [value, name] : kScenarioNames) {
    if (value == scenario) return name;
  }
  return "unknown";
}

absl::StatusOr<Scenario> ParseScenario(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (const auto& [value, known] : kScenarioNames) {
    if (known == lower) return value;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown scenario '", name, "'"));
}

absl::string_view MethodName(Method method) {
  for (const auto& [value, name] : kMethodNames) {
    if (value == method) return name;
  }
  return "unknown";
}

absl::StatusOr<Method> ParseMethod(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (const auto& [value, known] : kMethodNames) {
    if (absl::AsciiStrToLower(known) == lower) return value;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown method '", name, "'"));
}

absl::string_view SweepVariable(Scenario scenario) {
  switch (scenario) {
    case Scenario::kHeterogeneity:
      return "gamma";
    case Scenario::kCommunication:
      return "d";
    case Scenario::kPrivacy:
      return "epsilon";
    case Scenario::kScalability:
      return "K";
    case Scenario::kProjection:
      return "m";
    default:
      return "";
  }
}

ExperimentConfig DefaultConfig(Scenario scenario) {
  ExperimentConfig config;
  config.scenario = scenario;
  config.iterative_rounds = {200};
  config.methods = {Method::kOneShot, Method::kFedAvg, Method::kFedProx,
                    Method::kCentralized};
  switch (scenario) {
    case Scenario::kMain:
      config.iterative_rounds = {100, 200, 500};
      break;
    case Scenario::kHeterogeneity:
      config.sweep = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
      break;
    case Scenario::kCommunication:
      config.sweep = {50, 100, 200, 400};
      config.methods = {Method::kOneShot, Method::kFedAvg};
      break;
    case Scenario::kConvergence:
      config.iterative_rounds = {300};
      break;
    case Scenario::kPrivacy:
      config.sweep = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
      config.methods = {Method::kOneShot, Method::kPrivateOneShot,
                        Method::kDpFedAvg};
      config.iterative_rounds = {100};
      config.data.dp_normalize = true;
      config.trials = 20;
      break;
    case Scenario::kScalability:
      config.sweep = {10, 20, 50, 100, 200, 500};
      config.methods = {Method::kOneShot, Method::kFedAvg};
      config.iterative_rounds = {100};
      config.data.samples_per_client = 200;
      break;
    case Scenario::kProjection:
      config.sweep = {50, 100, 200, 400, 600, 800, 1000};
      config.methods = {Method::kProjectedOneShot, Method::kOneShot,
                        Method::kFedAvg};
      config.data.dim = 1000;
      config.diagnostics = false;
      break;
  }
  return config;
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError("trials must be >= 1");
  }
  if (config.methods.empty()) {
    return absl::InvalidArgumentError("no methods selected");
  }
  if (!(config.sigma > 0.0)) {
    return absl::InvalidArgumentError("sigma must be positive");
  }
  if (Sweeps(config.scenario) && config.sweep.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "scenario %s needs a nonempty %s grid", ScenarioName(config.scenario),
        SweepVariable(config.scenario)));
  }
  for (int rounds : config.iterative_rounds) {
    if (rounds < 1) return absl::InvalidArgumentError("rounds must be >= 1");
  }
  if (absl::Status s = ValidateIterativeConfig(config.iterative); !s.ok()) {
    return s;
  }
  for (double value : config.sweep) {
    switch (config.scenario) {
      case Scenario::kHeterogeneity:
        if (!(value >= 0.0 && value <= 1.0)) {
          return absl::InvalidArgumentError("gamma grid must lie in [0, 1]");
        }
        break;
      case Scenario::kCommunication:
      case Scenario::kScalability:
        if (value < 1 || value != std::floor(value)) {
          return absl::InvalidArgumentError(
              "d / K grid entries must be positive integers");
        }
        break;
      case Scenario::kPrivacy:
        if (!(value > 0.0)) {
          return absl::InvalidArgumentError("epsilon grid must be positive");
        }
        break;
      case Scenario::kProjection:
        if (value < 1 || value > config.data.dim || value != std::floor(value)) {
          return absl::InvalidArgumentError(
              "projection grid entries must be integers in [1, d]");
        }
        break;
      default:
        break;
    }
  }
  SynthSpec probe = config.data;
  if (config.scenario == Scenario::kHeterogeneity) probe.gamma = 0.0;
  return ValidateSynthSpec(probe);
}

bool RecordLess(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.scenario, a.method, a.sweep_value, a.trial) <
         std::tie(b.scenario, b.method, b.sweep_value, b.trial);
}

absl::StatusOr<std::vector<RunRecord>> RunExperiment(
    const ExperimentConfig& config) {
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  const std::vector<double> sweep =
      Sweeps(config.scenario) ? config.sweep : std::vector<double>{0.0};
  const std::vector<int> rounds_grid =
      config.iterative_rounds.empty()
          ? std::vector<int>{config.iterative.rounds}
          : config.iterative_rounds;

  std::vector<RunRecord> records;
  auto run_methods = [&](CellContext& cell, bool swept) {
    for (Method method : config.methods) {
      if (SweepDependent(config.scenario, method) != swept) continue;
      if (IsIterative(method)) {
        for (int rounds : rounds_grid) {
          records.push_back(RunCell(cell, method, rounds));
        }
      } else {
        records.push_back(RunCell(cell, method, 0));
      }
    }
  };

  for (int trial = 0; trial < config.trials; ++trial) {
    if (SweepChangesData(config.scenario) || !Sweeps(config.scenario)) {
      for (size_t s = 0; s < sweep.size(); ++s) {
        const SynthSpec spec = DataForCell(config, sweep[s], trial);
        absl::StatusOr<SynthData> data = Generate(spec);
        if (!data.ok()) return data.status();
        CellContext cell{&config, &*data, sweep[s], s, trial, spec.seed,
                         std::nullopt};
        run_methods(cell, /*swept=*/false);
        run_methods(cell, /*swept=*/true);
      }
      continue;
    }
    // Privacy and Projection: one dataset per trial. Methods that do not
    // depend on the sweep run once and are reported at sweep_value 0.
    const SynthSpec spec = DataForCell(config, 0.0, trial);
    absl::StatusOr<SynthData> data = Generate(spec);
    if (!data.ok()) return data.status();
    CellContext cell{&config, &*data, 0.0, 0, trial, spec.seed, std::nullopt};
    run_methods(cell, /*swept=*/false);
    for (size_t s = 0; s < sweep.size(); ++s) {
      cell.sweep_value = sweep[s];
      cell.sweep_index = s;
      run_methods(cell, /*swept=*/true);
    }
  }
  std::stable_sort(records.begin(), records.end(), RecordLess);
  return records;
}

}  // namespace fedridge
