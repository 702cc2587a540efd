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

#ifndef FEDRIDGE_REPORT_H_
#define FEDRIDGE_REPORT_H_

#include <span>
#include <string>
#include <vector>

#include "fedridge/bench.h"

namespace fedridge {

// Per (scenario, method, sweep_value) aggregate over trials.
struct SummaryRow {
  std::string scenario;
  std::string method;
  double sweep_value = 0.0;
  int trials = 0;
  int failures = 0;
  double mse_mean = 0.0;  // over successful trials
  double mse_std = 0.0;   // sample standard deviation
  double rounds = 0.0;    // mean; 0 when not applicable
  bool has_rounds = false;
  double upload_mb = 0.0;  // mean total upload, 1 MB = 1e6 bytes
  double download_mb = 0.0;
  double wall_time_s = 0.0;
};

std::vector<SummaryRow> Summarize(std::span<const RunRecord> records);

// Plain-text table of Summarize() output, one block per scenario.
std::string FormatReport(std::span<const SummaryRow> rows);

}  // namespace fedridge

#endif  // FEDRIDGE_REPORT_H_
