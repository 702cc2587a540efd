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

#ifndef FEDRIDGE_RESULTS_IO_H_
#define FEDRIDGE_RESULTS_IO_H_

#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "fedridge/bench.h"

namespace fedridge {

enum class ResultFormat { kCsv, kJson };

absl::StatusOr<ResultFormat> ParseResultFormat(absl::string_view name);

// Column order of both formats.
inline constexpr absl::string_view kResultColumns[] = {
    "scenario",       "method",         "sweep_value", "trial",
    "test_mse",       "rounds",         "upload_bytes", "download_bytes",
    "wall_time_s",    "extra_json"};

// CSV: header plus one row per record, '\n' line endings, floats printed with
// 17 significant digits, empty cells for missing test_mse / rounds. Fields
// containing a comma or quote are quoted with doubled inner quotes.
std::string FormatCsv(std::span<const RunRecord> records);
// JSON: array of flat objects keyed by the CSV column names.
std::string FormatJson(std::span<const RunRecord> records);

absl::StatusOr<std::vector<RunRecord>> ParseCsv(absl::string_view text);
absl::StatusOr<std::vector<RunRecord>> ParseJson(absl::string_view text);
// Picks the parser from the first non-blank character.
absl::StatusOr<std::vector<RunRecord>> ParseResults(absl::string_view text);

absl::Status EmitResults(std::span<const RunRecord> records,
                         ResultFormat format, const std::string& path);
absl::StatusOr<std::vector<RunRecord>> LoadResults(const std::string& path);

}  // namespace fedridge

#endif  // FEDRIDGE_RESULTS_IO_H_
