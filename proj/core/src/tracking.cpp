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

#include "tvopf/tracking.hpp"

#include <algorithm>
#include <limits>

#include "tvopf/diagnostics.hpp"
#include "tvopf/error.hpp"

namespace tvopf {

namespace {

const char* mode_name(UpdateMode m) { return m == UpdateMode::exact ? "exact" : "prox"; }
const char* dual_name(DualStep d) { return d == DualStep::ascent ? "ascent" : "literal"; }

}  // namespace

TrackingReport track(const Scenario& scenario, std::shared_ptr<const Formulation> f,
                     const SolverConfig& config, const TrackOptions& options) {
  config.validate();
  const Formulation& form = *f;
  const NetworkModel& model = form.model;

  std::vector<int> positions;
  std::vector<int> ids = options.reported_buses;
  if (ids.empty())
    for (int b : form.bus_of) ids.push_back(model.buses[b].id);
  for (int id : ids) {
    const auto b = model.bus_index(id);
    if (!b) throw ValidationError("reported bus " + std::to_string(id) + " does not exist");
    const auto it = std::find(form.bus_of.begin(), form.bus_of.end(), *b);
    if (it == form.bus_of.end())
      throw ValidationError("reported bus " + std::to_string(id) + " is not modeled (folded slack)");
    positions.push_back(static_cast<int>(it - form.bus_of.begin()));
  }

  TrackingReport report;
  RunHeader& h = report.header;
  h.command = "track";
  h.mode = mode_name(config.mode);
  h.dual = dual_name(config.dual);
  h.slack_mode = form.mode == SlackMode::embedded ? "embedded" : "folded";
  h.lipschitz = config.lipschitz ? format_double(*config.lipschitz) : "auto";
  h.mu = config.mu;
  h.budget = config.budget;
  h.seed = config.seed;
  h.solver_hz = options.solver_hz;
  h.data_hz = scenario.data_hz;
  h.n = form.n();
  h.ng = form.ng();
  h.p = form.matrices.p;
  if (!model.buses.empty()) {
    h.vmin = model.buses.front().vmin;
    h.vmax = model.buses.front().vmax;
    for (const Bus& b : model.buses) {
      h.vmin = std::min(h.vmin, b.vmin);
      h.vmax = std::max(h.vmax, b.vmax);
    }
  }
  h.case_hash = options.case_hash;
  h.scenario_hash = options.scenario_hash;
  h.reported_buses = ids;

  const std::int64_t steps = step_count(scenario, options.solver_hz);
  if (steps == 0) return report;

  ProblemInstance previous = instance_at(scenario, f, 0, options.solver_hz);
  CoordinateDescent cd(previous, config);
  for (std::int64_t k = 0; k < steps; ++k) {
    const ProblemInstance inst = instance_at(scenario, f, k, options.solver_hz);
    StepRecord rec;
    rec.k = k;
    rec.timestamp = inst.timestamp;
    try {
      if (k > 0) {
        cd.set_instance(inst);
        const std::vector<double> sample = cd.state();
        rec.drift = estimate_drift(inst, previous, config.mu, std::span(&sample, 1));
      }
      cd.run(config.budget);
      rec.lagrangian = cd.lagrangian();
    } catch (const NumericError& e) {
      report.failures.push_back({k, e.what()});
      cd.recover();
      try {
        rec.lagrangian = cd.lagrangian();
      } catch (const NumericError&) {
        rec.lagrangian = std::numeric_limits<double>::quiet_NaN();
      }
    }
    const Metrics m = eval_metrics(cd.state(), inst);
    rec.cost = m.cost;
    rec.infeasibility = m.infeasibility;
    rec.infeasibility_lower = m.infeasibility_lower;
    rec.flops = cd.flops().flops;
    for (int pos : positions) rec.vmag.push_back(m.vmag[pos]);
    report.records.push_back(std::move(rec));
    previous = inst;
  }
  return report;
}

}  // namespace tvopf
