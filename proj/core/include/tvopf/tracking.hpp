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

#include <memory>
#include <string>
#include <vector>

#include "tvopf/lifted.hpp"
#include "tvopf/report.hpp"
#include "tvopf/scenario.hpp"
#include "tvopf/solver.hpp"

namespace tvopf {

struct TrackOptions {
  double solver_hz = 1.0;
  std::vector<int> reported_buses;  // bus ids; empty: every modeled bus
  std::string case_hash;
  std::string scenario_hash;
};

/// Replays the scenario: at each solver step the instance is refreshed
/// (zero-order hold), the iterate is projected onto the new box and
/// `config.budget` coordinate updates run, warm-started from the last step.
/// A failing step is recorded and tracking resumes from the projected state.
TrackingReport track(const Scenario& scenario, std::shared_ptr<const Formulation> f,
                     const SolverConfig& config, const TrackOptions& options);

}  // namespace tvopf
