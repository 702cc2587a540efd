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

#include "fedridge/bench_config.h"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "boost/property_tree/ini_parser.hpp"
#include "boost/property_tree/ptree.hpp"

namespace fedridge {
namespace {

using boost::property_tree::ptree;

absl::StatusOr<ptree> ParseIni(absl::string_view text) {
  std::istringstream stream{std::string(text)};
  ptree tree;
  try {
    boost::property_tree::read_ini(stream, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    return absl::InvalidArgumentError(absl::StrCat("config: ", e.message(),
                                                   " (line ", e.line(), ")"));
  }
  return tree;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream file(path);
  if (!file) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return std::string((std::istreambuf_iterator<char>(file)),
                     std::istreambuf_iterator<char>());
}

// Typed accessors over one section that remember which keys were consumed.
class Section {
 public:
  Section(std::string name, const ptree* tree)
      : name_(std::move(name)), tree_(tree) {}

  bool Has(const std::string& key) const {
    return tree_ != nullptr && tree_->find(key) != tree_->not_found();
  }

  std::string Raw(const std::string& key) {
    used_.insert(key);
    return std::string(absl::StripAsciiWhitespace(tree_->get<std::string>(key)));
  }

  template <typename T>
  absl::Status Number(const std::string& key, T& out) {
    if (!Has(key)) return absl::OkStatus();
    const std::string value = Raw(key);
    bool ok;
    if constexpr (std::is_floating_point_v<T>) {
      ok = absl::SimpleAtod(value, &out);
    } else {
      ok = absl::SimpleAtoi(value, &out);
    }
    return ok ? absl::OkStatus() : Bad(key, value);
  }

  absl::Status Bool(const std::string& key, bool& out) {
    if (!Has(key)) return absl::OkStatus();
    const std::string value = Raw(key);
    return absl::SimpleAtob(value, &out) ? absl::OkStatus() : Bad(key, value);
  }

  absl::Status Bad(const std::string& key, const std::string& value) const {
    return absl::InvalidArgumentError(
        absl::StrCat("config [", name_, "] ", key, ": bad value '", value, "'"));
  }

  absl::Status CheckAllUsed() const {
    if (tree_ == nullptr) return absl::OkStatus();
    for (const auto& [key, child] : *tree_) {
      if (!used_.contains(key)) {
        return absl::InvalidArgumentError(
            absl::StrCat("config [", name_, "]: unknown key '", key, "'"));
      }
    }
    return absl::OkStatus();
  }

 private:
  std::string name_;
  const ptree* tree_;
  std::set<std::string> used_;
};

const ptree* Child(const ptree& tree, const std::string& name) {
  auto it = tree.find(name);
  return it == tree.not_found() ? nullptr : &it->second;
}

absl::Status ReadData(Section& data, SynthSpec& spec) {
  for (absl::Status s : {data.Number("clients", spec.num_clients),
                         data.Number("samples_per_client", spec.samples_per_client),
                         data.Number("dim", spec.dim),
                         data.Number("gamma", spec.gamma),
                         data.Number("noise_std", spec.noise_std),
                         data.Number("test_fraction", spec.test_fraction),
                         data.Bool("dp_normalize", spec.dp_normalize),
                         data.Number("seed", spec.seed)}) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status ReadList(Section& section, const std::string& key,
                      std::vector<double>& out) {
  if (!section.Has(key)) return absl::OkStatus();
  const std::string raw = section.Raw(key);
  absl::StatusOr<std::vector<double>> values = ParseDoubleList(raw);
  if (!values.ok()) return section.Bad(key, raw);
  out = *std::move(values);
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<double>> ParseDoubleList(absl::string_view text) {
  std::vector<double> out;
  if (absl::StripAsciiWhitespace(text).empty()) {
    return absl::InvalidArgumentError("empty list");
  }
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    double value;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(part), &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", part, "' is not a number"));
    }
    out.push_back(value);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty list");
  return out;
}

absl::StatusOr<std::vector<int>> ParseIntList(absl::string_view text) {
  std::vector<int> out;
  if (absl::StripAsciiWhitespace(text).empty()) {
    return absl::InvalidArgumentError("empty list");
  }
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    int value;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(part), &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", part, "' is not an integer"));
    }
    out.push_back(value);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty list");
  return out;
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text) {
  absl::StatusOr<ptree> tree = ParseIni(text);
  if (!tree.ok()) return tree.status();

  static const std::set<std::string> kSections = {
      "experiment",    "data",        "iterative",   "heterogeneity",
      "communication", "privacy",     "scalability", "projection"};
  for (const auto& [name, child] : *tree) {
    if (!kSections.contains(name)) {
      return absl::InvalidArgumentError(
          child.empty() ? absl::StrCat("config: key '", name,
                                       "' outside of any section")
                        : absl::StrCat("config: unknown section [", name, "]"));
    }
  }

  Section experiment("experiment", Child(*tree, "experiment"));
  if (!experiment.Has("scenario")) {
    return absl::InvalidArgumentError("config: [experiment] scenario is required");
  }
  const std::string scenario_name = experiment.Raw("scenario");
  absl::StatusOr<Scenario> scenario = ParseScenario(scenario_name);
  if (!scenario.ok()) return scenario.status();
  ExperimentConfig config = DefaultConfig(*scenario);

  if (experiment.Has("methods")) {
    config.methods.clear();
    const std::string raw = experiment.Raw("methods");
    for (absl::string_view name :
         absl::StrSplit(raw, ',', absl::SkipWhitespace())) {
      absl::StatusOr<Method> method =
          ParseMethod(absl::StripAsciiWhitespace(name));
      if (!method.ok()) return method.status();
      config.methods.push_back(*method);
    }
  }
  for (absl::Status s : {experiment.Number("sigma", config.sigma),
                         experiment.Number("trials", config.trials),
                         experiment.Number("base_seed", config.base_seed),
                         experiment.Bool("diagnostics", config.diagnostics),
                         experiment.Bool("record_timing", config.record_timing),
                         experiment.CheckAllUsed()}) {
    if (!s.ok()) return s;
  }

  Section data("data", Child(*tree, "data"));
  if (absl::Status s = ReadData(data, config.data); !s.ok()) return s;
  if (absl::Status s = data.CheckAllUsed(); !s.ok()) return s;

  Section iterative("iterative", Child(*tree, "iterative"));
  IterativeConfig& it = config.iterative;
  for (absl::Status s :
       {iterative.Number("learning_rate", it.learning_rate),
        iterative.Number("local_epochs", it.local_epochs),
        iterative.Number("proximal_mu", it.proximal_mu),
        iterative.Number("batch_size", it.batch_size),
        iterative.Number("clients_per_round", it.clients_per_round)}) {
    if (!s.ok()) return s;
  }
  if (iterative.Has("rounds")) {
    const std::string raw = iterative.Raw("rounds");
    absl::StatusOr<std::vector<int>> rounds = ParseIntList(raw);
    if (!rounds.ok()) return iterative.Bad("rounds", raw);
    config.iterative_rounds = *rounds;
    it.rounds = rounds->back();
  }
  if (iterative.Has("loss_scaling")) {
    const std::string raw = absl::AsciiStrToLower(iterative.Raw("loss_scaling"));
    if (raw == "per_sample") {
      it.loss_scaling = LossScaling::kPerSample;
    } else if (raw == "sum") {
      it.loss_scaling = LossScaling::kSum;
    } else {
      return iterative.Bad("loss_scaling", raw);
    }
  }
  if (absl::Status s = iterative.CheckAllUsed(); !s.ok()) return s;

  Section heterogeneity("heterogeneity", Child(*tree, "heterogeneity"));
  Section communication("communication", Child(*tree, "communication"));
  Section privacy("privacy", Child(*tree, "privacy"));
  Section scalability("scalability", Child(*tree, "scalability"));
  Section projection("projection", Child(*tree, "projection"));
  std::vector<double> gammas, dims, epsilons, clients, target_dims;
  for (absl::Status s :
       {ReadList(heterogeneity, "gammas", gammas),
        ReadList(communication, "dims", dims),
        ReadList(privacy, "epsilons", epsilons),
        privacy.Number("delta", config.delta),
        ReadList(scalability, "clients", clients),
        scalability.Number("sampling_threshold", config.sampling_threshold),
        scalability.Number("sampled_clients", config.sampled_clients),
        ReadList(projection, "target_dims", target_dims),
        heterogeneity.CheckAllUsed(), communication.CheckAllUsed(),
        privacy.CheckAllUsed(), scalability.CheckAllUsed(),
        projection.CheckAllUsed()}) {
    if (!s.ok()) return s;
  }
  const std::vector<double>* sweep = nullptr;
  switch (config.scenario) {
    case Scenario::kHeterogeneity: sweep = &gammas; break;
    case Scenario::kCommunication: sweep = &dims; break;
    case Scenario::kPrivacy: sweep = &epsilons; break;
    case Scenario::kScalability: sweep = &clients; break;
    case Scenario::kProjection: sweep = &target_dims; break;
    default: break;
  }
  if (sweep != nullptr && !sweep->empty()) config.sweep = *sweep;
  if (config.scenario == Scenario::kPrivacy) config.data.dp_normalize = true;

  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseExperimentConfig(*text);
}

absl::StatusOr<SynthSpec> ParseSynthSpec(absl::string_view text) {
  absl::StatusOr<ptree> tree = ParseIni(text);
  if (!tree.ok()) return tree.status();
  Section data("data", Child(*tree, "data"));
  SynthSpec spec;
  if (absl::Status s = ReadData(data, spec); !s.ok()) return s;
  if (absl::Status s = data.CheckAllUsed(); !s.ok()) return s;
  if (absl::Status s = ValidateSynthSpec(spec); !s.ok()) return s;
  return spec;
}

absl::StatusOr<SynthSpec> LoadSynthSpec(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseSynthSpec(*text);
}

}  // namespace fedridge
