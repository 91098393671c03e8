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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tvopf {

// Static grid description. Everything is stored in per-unit; conversion
// from MW/MVA happens in parse_case only.

struct Bus {
  int id = 0;
  double vmin = 0.95;  // pu
  double vmax = 1.05;  // pu
  bool regulated = true;
  double pd = 0.0;  // static active load, pu
  double qd = 0.0;  // static reactive load, pu
};

struct Line {
  int from = 0;  // bus index (position in NetworkModel::buses), not id
  int to = 0;
  double r = 0.0;  // series resistance, pu
  double x = 0.0;  // series reactance, pu
  double b_shunt = 0.0;  // total line charging, split half per end
};

struct Generator {
  int bus = 0;  // bus index
  double c = 0.0;  // active cost weight
  double d = 0.0;  // reactive cost weight
  double s_rating = 0.0;  // apparent power rating, pu
  double p_av_max = 0.0;  // static available active power, pu
};

struct Slack {
  int bus = 0;  // bus index
  double rho0 = 1.0;  // pu
  double theta0 = 0.0;  // rad
};

struct NetworkModel {
  double base_mva = 100.0;
  Slack slack;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;

  [[nodiscard]] int bus_count() const { return static_cast<int>(buses.size()); }
  [[nodiscard]] int generator_count() const {
    return static_cast<int>(generators.size());
  }
  /// Index of the bus with the given id, or nullopt.
  [[nodiscard]] std::optional<int> bus_index(int id) const;
  /// Generator index attached to bus index `bus`, or -1.
  [[nodiscard]] int generator_at(int bus) const;
};

/// Parses and validates a case file. Throws ParseError (with line/field) or
/// ValidationError (naming the violated invariant).
NetworkModel parse_case(const std::filesystem::path& path);
NetworkModel parse_case_text(std::string_view text);

/// Serializes a model back to the case schema (MW/MVA units restored).
std::string write_case_text(const NetworkModel& model);

/// Empty iff every model invariant holds.
std::vector<std::string> validate_network(const NetworkModel& model);

/// FNV-1a 64-bit digest, used for report headers.
std::uint64_t fnv1a(std::string_view bytes);

struct SyntheticCaseOptions {
  int buses = 10;
  int generators = 3;
  int loaded_buses = -1;  // -1: every non-generator bus carries load
  int max_degree = 3;  // upper bound on line count per bus
  int extra_lines = -1;  // chords beyond the spanning ring; -1: buses / 4
  double vmin = 0.95;
  double vmax = 1.05;
  double load_min = 0.05;  // pu
  double load_max = 0.3;  // pu
  double s_rating = 2.0;  // pu
  double p_av_max = 1.5;  // pu
  bool slack_is_generator = true;
  std::uint64_t seed = 1;
};

/// Deterministic meshed test network: a ring through all buses plus random
/// chords (subject to max_degree). Bus 0 is the slack; generators are spread
/// evenly over the remaining buses (and the slack, if slack_is_generator).
NetworkModel make_synthetic_case(const SyntheticCaseOptions& options);

}  // namespace tvopf
