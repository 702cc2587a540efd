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

#include "fedridge/report.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fedridge {

std::vector<SummaryRow> Summarize(std::span<const RunRecord> records) {
  using Key = std::tuple<std::string, std::string, double>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    groups[{r.scenario, r.method, r.sweep_value}].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    std::tie(row.scenario, row.method, row.sweep_value) = key;
    row.trials = static_cast<int>(members.size());
    std::vector<double> mses;
    for (const RunRecord* r : members) {
      if (r->test_mse.has_value()) {
        mses.push_back(*r->test_mse);
      } else {
        ++row.failures;
      }
      if (r->rounds.has_value()) {
        row.has_rounds = true;
        row.rounds += *r->rounds;
      }
      row.upload_mb += r->upload_bytes / 1e6;
      row.download_mb += r->download_bytes / 1e6;
      row.wall_time_s += r->wall_time_s;
    }
    const double n = static_cast<double>(members.size());
    row.rounds /= n;
    row.upload_mb /= n;
    row.download_mb /= n;
    row.wall_time_s /= n;
    if (!mses.empty()) {
      double sum = 0.0;
      for (double v : mses) sum += v;
      row.mse_mean = sum / mses.size();
      if (mses.size() > 1) {
        double sq = 0.0;
        for (double v : mses) sq += (v - row.mse_mean) * (v - row.mse_mean);
        row.mse_std = std::sqrt(sq / (mses.size() - 1));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string FormatReport(std::span<const SummaryRow> rows) {
  std::string out;
  std::string current;
  for (const SummaryRow& row : rows) {
    if (row.scenario != current) {
      current = row.scenario;
      absl::StrAppend(&out, out.empty() ? "" : "\n", "== ", current, " ==\n");
      absl::StrAppendFormat(&out, "%-18s %10s %24s %7s %8s %12s %12s %10s\n",
                            "method", "sweep", "test MSE (mean +- std)",
                            "ok/n", "rounds", "upload MB", "download MB",
                            "time s");
    }
    const std::string mse =
        row.failures == row.trials
            ? std::string("failed")
            : absl::StrFormat("%.5f +- %.5f", row.mse_mean, row.mse_std);
    absl::StrAppendFormat(
        &out, "%-18s %10g %24s %3d/%-3d %8s %12.4f %12.4f %10.4f\n", row.method,
        row.sweep_value, mse, row.trials - row.failures, row.trials,
        row.has_rounds ? absl::StrFormat("%g", row.rounds) : std::string("--"),
        row.upload_mb, row.download_mb, row.wall_time_s);
  }
  return out;
}

}  // namespace fedridge
