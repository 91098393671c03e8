/*
 * Copyright 2026 The tvopf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tvopf {

/// Everything needed to rerun a tracking run bit-identically.
struct RunHeader {
  std::string command = "track";
  std::string mode = "exact";  // exact | prox
  std::string dual = "ascent";
  std::string slack_mode = "embedded";
  std::string lipschitz = "auto";  // "auto" or the fixed value
  double mu = 1.0;
  std::int64_t budget = 1;
  std::uint64_t seed = 0;
  double solver_hz = 1.0;
  double data_hz = 1.0;
  std::int64_t n = 0;
  std::int64_t ng = 0;
  std::int64_t p = 1;
  double vmin = 0.0;
  double vmax = 0.0;
  std::string case_hash;
  std::string scenario_hash;
  std::vector<int> reported_buses;  // bus ids

  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

struct StepRecord {
  std::int64_t k = 0;
  double timestamp = 0.0;
  double cost = 0.0;
  double infeasibility = 0.0;  // T
  double infeasibility_lower = 0.0;  // T'
  double lagrangian = 0.0;
  std::int64_t flops = 0;  // cumulative
  double drift = 0.0;  // estimated lower bound on e for this step
  std::vector<double> vmag;  // one per reported bus

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct StepFailure {
  std::int64_t k = 0;
  std::string message;

  friend bool operator==(const StepFailure&, const StepFailure&) = default;
};

struct TrackingReport {
  RunHeader header;
  std::vector<StepRecord> records;
  std::vector<StepFailure> failures;

  friend bool operator==(const TrackingReport&, const TrackingReport&) = default;
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view name);

/// CSV: `#`-prefixed header lines, then
///   k,timestamp,cost,T,Tprime,L,flops,drift,V_<bus>...
std::string report_to_csv(const TrackingReport& report);
TrackingReport report_from_csv(std::string_view text);

std::string report_to_json(const TrackingReport& report);
TrackingReport report_from_json(std::string_view text);

/// Writes the report; throws std::runtime_error naming the path on I/O failure.
void emit_outputs(const TrackingReport& report, ReportFormat format,
                  const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace tvopf
