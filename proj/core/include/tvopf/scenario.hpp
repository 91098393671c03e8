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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tvopf/lifted.hpp"
#include "tvopf/network.hpp"

namespace tvopf {

/// One data sample. pl/ql are indexed by model bus, pav by model generator.
struct ScenarioStep {
  double time = 0.0;  // seconds
  std::vector<double> pl, ql, pav;
};

struct Scenario {
  double data_hz = 1.0;
  std::vector<ScenarioStep> steps;
  std::string source;

  [[nodiscard]] double duration() const {
    return static_cast<double>(steps.size()) / data_hz;
  }
};

/// Reads the scenario CSV:
///   t,Pl_<bus>...,Ql_<bus>...,Pav_<gen bus>...
/// Pl/Ql columns may cover a subset of buses (the rest keep the case's static
/// loads); every generator needs a Pav column.
Scenario load_scenario(const std::filesystem::path& path, const NetworkModel& model);
Scenario load_scenario_text(std::string_view text, const NetworkModel& model);

/// Writes every bus and generator column; values round-trip bit-exactly.
std::string write_scenario_text(const Scenario& scenario, const NetworkModel& model);

struct SynthSpec {
  double duration = 60.0;  // seconds
  double data_hz = 1.0;
  double amplitude = 0.1;  // relative load swing, in [0, 1)
  double pv_amplitude = -1.0;  // relative availability swing; < 0: same as amplitude
  double period = 60.0;  // seconds
  double noise = 0.0;  // absolute std-dev of load noise, pu
  std::uint64_t seed = 0;
};

/// Sinusoidal loads around the case's static values with per-bus phases,
/// Gaussian noise, and a clipped sine-bump availability profile:
///   P_l,i(k) = P_i (1 + A sin(2 pi k / (period data_hz) + phi_i)) + noise
///   P_av,g(k) = P_g (1 - A_pv + A_pv max(0, sin(2 pi k / (period data_hz))))
/// Reactive loads scale with the same factor as the active ones.
Scenario synth_scenario(const NetworkModel& model, const SynthSpec& spec);

/// Number of solver steps at `solver_hz` covered by the scenario.
std::int64_t step_count(const Scenario& scenario, double solver_hz);

/// Zero-order hold: the most recent data sample at or before k / solver_hz.
std::int64_t sample_index(const Scenario& scenario, std::int64_t k, double solver_hz);

ProblemInstance instance_at(const Scenario& scenario, std::shared_ptr<const Formulation> f,
                            std::int64_t k, double solver_hz);

}  // namespace tvopf
