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

#include "fedridge/results_io.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace fedridge {
namespace {

using Json = nlohmann::ordered_json;

std::string FormatDouble(double value) { return absl::StrFormat("%.17g", value); }

std::string QuoteCsv(absl::string_view field) {
  if (field.find_first_of(",\"\n\r") == absl::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV document into rows of unquoted fields.
absl::StatusOr<std::vector<std::vector<std::string>>> SplitCsv(
    absl::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_content = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\n') {
      if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      row_has_content = false;
    } else if (c != '\r') {
      field += c;
      row_has_content = true;
    }
  }
  if (quoted) return absl::DataLossError("unterminated quoted CSV field");
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::Status ParseDoubleField(absl::string_view text, absl::string_view column,
                              double& out) {
  if (!absl::SimpleAtod(text, &out)) {
    return absl::DataLossError(
        absl::StrCat("column ", column, ": '", text, "' is not a number"));
  }
  return absl::OkStatus();
}

template <typename Int>
absl::Status ParseIntField(absl::string_view text, absl::string_view column,
                           Int& out) {
  if (!absl::SimpleAtoi(text, &out)) {
    return absl::DataLossError(
        absl::StrCat("column ", column, ": '", text, "' is not an integer"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ResultFormat> ParseResultFormat(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "csv") return ResultFormat::kCsv;
  if (lower == "json") return ResultFormat::kJson;
  return absl::InvalidArgumentError(absl::StrCat("unknown format '", name, "'"));
}

std::string FormatCsv(std::span<const RunRecord> records) {
  std::string out = absl::StrJoin(kResultColumns, ",");
  out += '\n';
  for (const RunRecord& r : records) {
    absl::StrAppend(
        &out, QuoteCsv(r.scenario), ",", QuoteCsv(r.method), ",",
        FormatDouble(r.sweep_value), ",", r.trial, ",",
        r.test_mse.has_value() ? FormatDouble(*r.test_mse) : "", ",",
        r.rounds.has_value() ? absl::StrCat(*r.rounds) : "", ",",
        r.upload_bytes, ",", r.download_bytes, ",", FormatDouble(r.wall_time_s),
        ",", QuoteCsv(r.extra_json), "\n");
  }
  return out;
}

std::string FormatJson(std::span<const RunRecord> records) {
  Json array = Json::array();
  for (const RunRecord& r : records) {
    Json row = Json::object();
    row["scenario"] = r.scenario;
    row["method"] = r.method;
    row["sweep_value"] = r.sweep_value;
    row["trial"] = r.trial;
    row["test_mse"] = r.test_mse.has_value() ? Json(*r.test_mse) : Json();
    row["rounds"] = r.rounds.has_value() ? Json(*r.rounds) : Json();
    row["upload_bytes"] = r.upload_bytes;
    row["download_bytes"] = r.download_bytes;
    row["wall_time_s"] = r.wall_time_s;
    row["extra_json"] = r.extra_json;
    array.push_back(std::move(row));
  }
  return array.dump(1) + "\n";
}

absl::StatusOr<std::vector<RunRecord>> ParseCsv(absl::string_view text) {
  absl::StatusOr<std::vector<std::vector<std::string>>> rows = SplitCsv(text);
  if (!rows.ok()) return rows.status();
  if (rows->empty()) return absl::DataLossError("empty results file");
  const std::vector<std::string>& header = rows->front();
  const size_t columns = std::size(kResultColumns);
  if (header.size() != columns) {
    return absl::DataLossError("unexpected CSV header");
  }
  for (size_t i = 0; i < columns; ++i) {
    if (header[i] != kResultColumns[i]) {
      return absl::DataLossError(
          absl::StrCat("unexpected CSV column '", header[i], "'"));
    }
  }
  std::vector<RunRecord> records;
  for (size_t line = 1; line < rows->size(); ++line) {
    const std::vector<std::string>& f = (*rows)[line];
    if (f.size() != columns) {
      return absl::DataLossError(
          absl::StrFormat("row %d has %d fields, expected %d", line, f.size(),
                          columns));
    }
    RunRecord r;
    r.scenario = f[0];
    r.method = f[1];
    if (auto s = ParseDoubleField(f[2], "sweep_value", r.sweep_value); !s.ok())
      return s;
    if (auto s = ParseIntField(f[3], "trial", r.trial); !s.ok()) return s;
    if (!f[4].empty()) {
      double mse;
      if (auto s = ParseDoubleField(f[4], "test_mse", mse); !s.ok()) return s;
      r.test_mse = mse;
    }
    if (!f[5].empty()) {
      int rounds;
      if (auto s = ParseIntField(f[5], "rounds", rounds); !s.ok()) return s;
      r.rounds = rounds;
    }
    if (auto s = ParseIntField(f[6], "upload_bytes", r.upload_bytes); !s.ok())
      return s;
    if (auto s = ParseIntField(f[7], "download_bytes", r.download_bytes);
        !s.ok())
      return s;
    if (auto s = ParseDoubleField(f[8], "wall_time_s", r.wall_time_s); !s.ok())
      return s;
    r.extra_json = f[9];
    records.push_back(std::move(r));
  }
  return records;
}

absl::StatusOr<std::vector<RunRecord>> ParseJson(absl::string_view text) {
  Json array = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (array.is_discarded() || !array.is_array()) {
    return absl::DataLossError("results JSON must be an array");
  }
  std::vector<RunRecord> records;
  try {
    for (const Json& row : array) {
      RunRecord r;
      r.scenario = row.at("scenario").get<std::string>();
      r.method = row.at("method").get<std::string>();
      r.sweep_value = row.at("sweep_value").get<double>();
      r.trial = row.at("trial").get<int>();
      if (!row.at("test_mse").is_null()) {
        r.test_mse = row.at("test_mse").get<double>();
      }
      if (!row.at("rounds").is_null()) r.rounds = row.at("rounds").get<int>();
      r.upload_bytes = row.at("upload_bytes").get<int64_t>();
      r.download_bytes = row.at("download_bytes").get<int64_t>();
      r.wall_time_s = row.at("wall_time_s").get<double>();
      r.extra_json = row.at("extra_json").get<std::string>();
      records.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    return absl::DataLossError(absl::StrCat("malformed result row: ", e.what()));
  }
  return records;
}

absl::StatusOr<std::vector<RunRecord>> ParseResults(absl::string_view text) {
  const absl::string_view trimmed = absl::StripLeadingAsciiWhitespace(text);
  if (!trimmed.empty() && trimmed.front() == '[') return ParseJson(text);
  return ParseCsv(text);
}

absl::Status EmitResults(std::span<const RunRecord> records,
                         ResultFormat format, const std::string& path) {
  if (records.empty()) return absl::InvalidArgumentError("no records to emit");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(absl::StrCat("cannot open ", path));
  }
  const std::string text =
      format == ResultFormat::kCsv ? FormatCsv(records) : FormatJson(records);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) return absl::UnavailableError(absl::StrCat("write to ", path, " failed"));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<RunRecord>> LoadResults(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  const std::string text((std::istreambuf_iterator<char>(file)),
                         std::istreambuf_iterator<char>());
  return ParseResults(text);
}

}  // namespace fedridge
