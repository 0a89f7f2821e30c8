// Copyright 2026 The hvtsim Authors
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

#pragma once

// Report serialization. Every JSON document is an envelope
//
//   {"spec": ..., "results": ..., "conformance": ..., "version": ..., "seed": ...}
//
// written with sorted keys and shortest round-trip numbers, so equal inputs
// give byte-identical files. CSV uses ',' and '.', LF line endings, and the
// literal NA for missing values.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hvtsim/harness.hpp"

namespace hvtsim {

using Json = nlohmann::json;

// Version of the library and of the JSON layout.
std::string_view library_version();

struct ReportEnvelope {
  Json spec = Json::object();
  Json results = Json::object();
  Json conformance = Json::object();
  std::string version{library_version()};
  std::uint64_t seed = 0;

  bool operator==(const ReportEnvelope&) const = default;
};

Json envelope_to_json(const ReportEnvelope& envelope);
ReportEnvelope envelope_from_json(const Json& j);
// Pretty-printed with a trailing newline.
std::string emit_json(const ReportEnvelope& envelope);
// Throws kIo on malformed input.
ReportEnvelope parse_envelope(std::string_view text);

// Shortest text that parses back to the same double; "NA" for nullopt.
std::string format_number(std::optional<double> value);
// Throws kIo when `text` is neither a number nor NA.
std::optional<double> parse_number(std::string_view text);

Json direction_to_json(const Direction& d);
Direction direction_from_json(const Json& j);

Json spec_to_json(const ExperimentSpec& spec);

Json experiment_to_json(const ExperimentReport& report);
ExperimentReport experiment_from_json(const Json& j);
// stage,reached,activated,positive,Q,P
std::string experiment_to_csv(const ExperimentReport& report);

Json table_to_json(const TableReport& table);
TableReport table_from_json(const Json& j);
// Conformance object listing every failing cell.
Json table_conformance(const TableReport& table);

struct TableCsvRow {
  std::string state;
  std::optional<double> q;
  std::optional<double> p;

  bool operator==(const TableCsvRow&) const = default;
};
// state,Q,P
std::string table_to_csv(const TableReport& table);
std::vector<TableCsvRow> parse_table_csv(std::string_view text);

Json qs_facts_to_json(const QsFactReport& report);
Json qs_facts_conformance(const QsFactReport& report);

Json inconsistency_to_json(const InconsistencyReport& report);
Json pair_run_to_json(const PairRun& run);
Json chsh_to_json(const ChshRun& run);
Json bohm_run_to_json(const BohmRun& run);

// Joins rows with LF; each row's cells with ','.
std::string csv_lines(const std::vector<std::vector<std::string>>& rows);

// Writes `content` to `path`, or to stdout for "-" or an empty path.
// Throws kIo with the path in the message.
void write_output(const std::string& path, std::string_view content);

}  // namespace hvtsim
