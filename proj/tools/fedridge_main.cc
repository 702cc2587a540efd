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

// Command-line driver: dataset generation, experiment runs and sweeps,
// federated cross-validation and result summaries.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "fedridge/bench.h"
#include "fedridge/bench_config.h"
#include "fedridge/crossval.h"
#include "fedridge/datagen.h"
#include "fedridge/report.h"
#include "fedridge/results_io.h"
#include "fedridge/stats.h"

namespace fedridge {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int Fail(int code, const absl::Status& status) {
  std::cerr << "fedridge: " << status.message() << "\n";
  return code;
}

int WriteRecords(const std::vector<RunRecord>& records,
                 const std::string& format_name, const std::string& out) {
  absl::StatusOr<ResultFormat> format = ParseResultFormat(format_name);
  if (!format.ok()) return Fail(kExitConfig, format.status());
  if (out.empty()) {
    std::cout << (*format == ResultFormat::kCsv ? FormatCsv(records)
                                                : FormatJson(records));
    return kExitOk;
  }
  if (absl::Status s = EmitResults(records, *format, out); !s.ok()) {
    return Fail(kExitRuntime, s);
  }
  return kExitOk;
}

struct DatagenArgs {
  std::string config;
  std::string out;
  std::string test_out;
  std::optional<uint64_t> seed;
};

int RunDatagen(const DatagenArgs& args) {
  absl::StatusOr<SynthSpec> spec = LoadSynthSpec(args.config);
  if (!spec.ok()) return Fail(kExitConfig, spec.status());
  if (args.seed.has_value()) spec->seed = *args.seed;
  absl::StatusOr<SynthData> data = Generate(*spec);
  if (!data.ok()) return Fail(kExitRuntime, data.status());
  if (absl::Status s = SaveDatasets(args.out, data->clients); !s.ok()) {
    return Fail(kExitRuntime, s);
  }
  if (!args.test_out.empty()) {
    const ClientDataset test[] = {data->test_set};
    if (absl::Status s = SaveDatasets(args.test_out, test); !s.ok()) {
      return Fail(kExitRuntime, s);
    }
  }
  std::cout << absl::StrFormat("wrote %d clients (d = %d) to %s\n",
                               data->clients.size(), spec->dim, args.out);
  return kExitOk;
}

struct RunArgs {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<uint64_t> seed;
};

int RunConfig(const RunArgs& args) {
  absl::StatusOr<ExperimentConfig> config = LoadExperimentConfig(args.config);
  if (!config.ok()) return Fail(kExitConfig, config.status());
  if (args.seed.has_value()) config->base_seed = *args.seed;
  absl::StatusOr<std::vector<RunRecord>> records = RunExperiment(*config);
  if (!records.ok()) return Fail(kExitRuntime, records.status());
  return WriteRecords(*records, args.format, args.out);
}

struct SweepArgs {
  std::string scenario;
  std::string eps, gammas, dims, clients, ms, rounds, methods;
  std::optional<int> trials;
  std::optional<double> sigma;
  std::optional<uint64_t> seed;
  bool no_timing = false;
  std::string out;
  std::string format = "csv";
};

int RunSweep(const SweepArgs& args) {
  absl::StatusOr<Scenario> scenario = ParseScenario(args.scenario);
  if (!scenario.ok()) return Fail(kExitConfig, scenario.status());
  ExperimentConfig config = DefaultConfig(*scenario);
  const std::pair<Scenario, const std::string*> grids[] = {
      {Scenario::kPrivacy, &args.eps},
      {Scenario::kHeterogeneity, &args.gammas},
      {Scenario::kCommunication, &args.dims},
      {Scenario::kScalability, &args.clients},
      {Scenario::kProjection, &args.ms},
  };
  for (const auto& [owner, text] : grids) {
    if (text->empty()) continue;
    if (owner != *scenario) {
      return Fail(kExitConfig,
                  absl::InvalidArgumentError(absl::StrFormat(
                      "that grid flag does not apply to scenario %s",
                      args.scenario)));
    }
    absl::StatusOr<std::vector<double>> values = ParseDoubleList(*text);
    if (!values.ok()) return Fail(kExitConfig, values.status());
    config.sweep = *values;
  }
  if (!args.rounds.empty()) {
    absl::StatusOr<std::vector<int>> rounds = ParseIntList(args.rounds);
    if (!rounds.ok()) return Fail(kExitConfig, rounds.status());
    config.iterative_rounds = *rounds;
  }
  if (!args.methods.empty()) {
    config.methods.clear();
    for (absl::string_view name : absl::StrSplit(args.methods, ',')) {
      absl::StatusOr<Method> method = ParseMethod(name);
      if (!method.ok()) return Fail(kExitConfig, method.status());
      config.methods.push_back(*method);
    }
  }
  if (args.trials.has_value()) config.trials = *args.trials;
  if (args.sigma.has_value()) config.sigma = *args.sigma;
  if (args.seed.has_value()) config.base_seed = *args.seed;
  config.record_timing = !args.no_timing;
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) {
    return Fail(kExitConfig, s);
  }
  absl::StatusOr<std::vector<RunRecord>> records = RunExperiment(config);
  if (!records.ok()) return Fail(kExitRuntime, records.status());
  return WriteRecords(*records, args.format, args.out);
}

struct CvArgs {
  std::string data;
  std::string sigmas = "1e-4,1e-3,1e-2,1e-1,1";
  SynthSpec spec;
  bool per_client = false;
};

int RunCv(const CvArgs& args) {
  absl::StatusOr<std::vector<double>> grid = ParseDoubleList(args.sigmas);
  if (!grid.ok()) return Fail(kExitConfig, grid.status());
  std::vector<ClientDataset> clients;
  if (!args.data.empty()) {
    absl::StatusOr<std::vector<ClientDataset>> loaded = LoadDatasets(args.data);
    if (!loaded.ok()) return Fail(kExitRuntime, loaded.status());
    clients = *std::move(loaded);
  } else {
    if (absl::Status s = ValidateSynthSpec(args.spec); !s.ok()) {
      return Fail(kExitConfig, s);
    }
    absl::StatusOr<SynthData> data = Generate(args.spec);
    if (!data.ok()) return Fail(kExitRuntime, data.status());
    clients = std::move(data->clients);
  }
  std::vector<SufficientStats> stats;
  for (const ClientDataset& client : clients) {
    absl::StatusOr<SufficientStats> local = ComputeLocalStats(client);
    if (!local.ok()) return Fail(kExitRuntime, local.status());
    stats.push_back(*std::move(local));
  }
  absl::StatusOr<CvReport> report = FederatedLocoCv(stats, clients, *grid);
  if (!report.ok()) {
    return Fail(report.status().code() == absl::StatusCode::kInvalidArgument
                    ? kExitConfig
                    : kExitRuntime,
                report.status());
  }
  std::cout << absl::StrFormat("selected_sigma %.17g\n", report->selected_sigma);
  std::cout << absl::StrFormat("%-12s %16s %16s\n", "sigma", "total_loss",
                               "mean_loss");
  const double k = static_cast<double>(report->client_ids.size());
  for (size_t s = 0; s < report->sigma_grid.size(); ++s) {
    std::cout << absl::StrFormat("%-12g %16.10g %16.10g\n",
                                 report->sigma_grid[s], report->total_losses[s],
                                 report->total_losses[s] / k);
  }
  if (args.per_client) {
    std::cout << "\nclient";
    for (double sigma : report->sigma_grid) {
      std::cout << absl::StrFormat(" %14g", sigma);
    }
    std::cout << "\n";
    for (size_t row = 0; row < report->client_ids.size(); ++row) {
      std::cout << absl::StrFormat("%6d", report->client_ids[row]);
      for (size_t s = 0; s < report->sigma_grid.size(); ++s) {
        std::cout << absl::StrFormat(" %14.8g", report->per_client_losses(row, s));
      }
      std::cout << "\n";
    }
  }
  std::cout << absl::StrFormat("overhead_scalars %d\n", report->overhead_scalars);
  return kExitOk;
}

int RunReport(const std::string& path) {
  absl::StatusOr<std::vector<RunRecord>> records = LoadResults(path);
  if (!records.ok()) {
    return Fail(records.status().code() == absl::StatusCode::kNotFound
                    ? kExitConfig
                    : kExitRuntime,
                records.status());
  }
  const std::vector<SummaryRow> rows = Summarize(*records);
  std::cout << FormatReport(rows);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Federated ridge regression by one-shot sufficient-statistic "
               "fusion"};
  app.require_subcommand(1);

  DatagenArgs datagen;
  CLI::App* datagen_cmd =
      app.add_subcommand("datagen", "Generate a synthetic dataset file");
  datagen_cmd->add_option("--config", datagen.config, "Config with a [data] section")
      ->required();
  datagen_cmd->add_option("--out", datagen.out, "Output dataset file")->required();
  datagen_cmd->add_option("--test-out", datagen.test_out, "Held-out test set file");
  datagen_cmd->add_option("--seed", datagen.seed, "Overrides [data] seed");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment config");
  run_cmd->add_option("--config", run.config, "Experiment config file")
      ->required();
  run_cmd->add_option("--out", run.out, "Results file (stdout when omitted)");
  run_cmd->add_option("--format", run.format, "csv or json");
  run_cmd->add_option("--seed", run.seed, "Overrides base_seed");

  SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a scenario with its default settings");
  sweep_cmd->add_option("--scenario", sweep.scenario,
                        "main, heterogeneity, communication, convergence, "
                        "privacy, scalability or projection")
      ->required();
  sweep_cmd->add_option("--eps", sweep.eps, "Privacy epsilons");
  sweep_cmd->add_option("--gammas", sweep.gammas, "Heterogeneity levels");
  sweep_cmd->add_option("--dims", sweep.dims, "Feature dimensions");
  sweep_cmd->add_option("--clients", sweep.clients, "Client counts");
  sweep_cmd->add_option("--ms", sweep.ms, "Projection dimensions");
  sweep_cmd->add_option("--rounds", sweep.rounds, "Iterative round counts");
  sweep_cmd->add_option("--methods", sweep.methods, "Comma-separated methods");
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per cell");
  sweep_cmd->add_option("--sigma", sweep.sigma, "Ridge regularization");
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed");
  sweep_cmd->add_flag("--no-timing", sweep.no_timing,
                      "Report zero wall times (byte-reproducible output)");
  sweep_cmd->add_option("--out", sweep.out, "Results file (stdout when omitted)");
  sweep_cmd->add_option("--format", sweep.format, "csv or json");

  CvArgs cv;
  CLI::App* cv_cmd = app.add_subcommand(
      "cv", "Leave-one-client-out cross-validation over a sigma grid");
  cv_cmd->add_option("--data", cv.data, "Dataset file (synthetic when omitted)");
  cv_cmd->add_option("--sigmas", cv.sigmas, "Comma-separated sigma grid");
  cv_cmd->add_option("--clients", cv.spec.num_clients, "Synthetic K");
  cv_cmd->add_option("--samples", cv.spec.samples_per_client, "Synthetic n_k");
  cv_cmd->add_option("--dim", cv.spec.dim, "Synthetic d");
  cv_cmd->add_option("--gamma", cv.spec.gamma, "Synthetic heterogeneity");
  cv_cmd->add_option("--seed", cv.spec.seed, "Synthetic data seed");
  cv_cmd->add_flag("--per-client", cv.per_client, "Print the per-client table");

  std::string report_path;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Summarize a results file per method");
  report_cmd->add_option("results", report_path, "CSV or JSON results file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "fedridge: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  if (*datagen_cmd) return RunDatagen(datagen);
  if (*run_cmd) return RunConfig(run);
  if (*sweep_cmd) return RunSweep(sweep);
  if (*cv_cmd) return RunCv(cv);
  return RunReport(report_path);
}

}  // namespace
}  // namespace fedridge

int main(int argc, char** argv) { return fedridge::Main(argc, argv); }
