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

#ifndef FEDRIDGE_BENCH_H_
#define FEDRIDGE_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "fedridge/baselines.h"
#include "fedridge/datagen.h"

namespace fedridge {

enum class Scenario {
  kMain,
  kHeterogeneity,
  kCommunication,
  kConvergence,
  kPrivacy,
  kScalability,
  kProjection,
};

enum class Method {
  kOneShot,
  kFedAvg,
  kFedProx,
  kCentralized,
  kPrivateOneShot,
  kDpFedAvg,
  kProjectedOneShot,
};

absl::string_view ScenarioName(Scenario scenario);
absl::StatusOr<Scenario> ParseScenario(absl::string_view name);
absl::string_view MethodName(Method method);
absl::StatusOr<Method> ParseMethod(absl::string_view name);

// What the sweep grid of each scenario varies:
//   Heterogeneity -> gamma, Communication -> d, Privacy -> epsilon,
//   Scalability -> K, Projection -> m. Main and Convergence do not sweep.
absl::string_view SweepVariable(Scenario scenario);

struct ExperimentConfig {
  Scenario scenario = Scenario::kMain;
  SynthSpec data;
  std::vector<Method> methods;
  double sigma = 0.01;
  IterativeConfig iterative;
  // Each iterative method runs once per entry (reported as e.g. "FedAvg-200").
  // Empty means {iterative.rounds}.
  std::vector<int> iterative_rounds;
  std::vector<double> sweep;
  double delta = 1e-5;
  // Scalability: above this many clients FedAvg samples `sampled_clients`
  // per round.
  int sampling_threshold = 50;
  int sampled_clients = 20;
  int trials = 5;
  uint64_t base_seed = 0;
  // Condition number and lambda_min of the aggregate for OneShot rows.
  bool diagnostics = true;
  // When false wall times are reported as 0 so output is byte-reproducible.
  bool record_timing = true;
};

// Scenario defaults: method set, sweep grid, and data overrides (e.g.
// n_k = 200 for Scalability, d = 1000 for Projection, 20 trials for Privacy).
ExperimentConfig DefaultConfig(Scenario scenario);

absl::Status ValidateExperimentConfig(const ExperimentConfig& config);

struct RunRecord {
  std::string scenario;
  std::string method;
  double sweep_value = 0.0;
  int trial = 0;
  std::optional<double> test_mse;  // empty on failure
  std::optional<int> rounds;       // empty for Centralized
  int64_t upload_bytes = 0;
  int64_t download_bytes = 0;
  double wall_time_s = 0.0;
  // Flat JSON object: "status" ("ok" or "failed"), "error", diagnostics,
  // per-round "trajectory" for the Convergence scenario.
  std::string extra_json = "{}";

  bool ok() const { return test_mse.has_value(); }
};

// Canonical ordering: scenario, method, sweep_value, trial.
bool RecordLess(const RunRecord& a, const RunRecord& b);

// Runs the method x sweep x trial grid. Data for trial t is generated from
// MixSeed(base_seed, t) at every sweep value, so methods and sweep points see
// the same random draws. In the privacy and projection scenarios, methods
// that do not depend on the sweep value (OneShot, FedAvg, ...) run once per
// trial and are reported at sweep_value 0. A failing cell becomes a record
// with status "failed"; only an invalid config aborts.
absl::StatusOr<std::vector<RunRecord>> RunExperiment(
    const ExperimentConfig& config);

}  // namespace fedridge

#endif  // FEDRIDGE_BENCH_H_
