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

#include "tvopf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvopf/error.hpp"

namespace tvopf {

namespace {

bool is_multiplier(Block b) {
  return b == Block::lambda_t || b == Block::lambda_g || b == Block::lambda_h || b == Block::lambda_z;
}

const char* block_name(Block b) {
  switch (b) {
    case Block::x:
      return "x";
    case Block::t:
      return "t";
    case Block::g:
      return "g";
    case Block::h:
      return "h";
    case Block::z:
      return "z";
    case Block::lambda_t:
      return "lambda_t";
    case Block::lambda_g:
      return "lambda_g";
    case Block::lambda_h:
      return "lambda_h";
    case Block::lambda_z:
      return "lambda_z";
  }
  return "?";
}

std::string describe(int i, Coordinate c) {
  return "coordinate " + std::to_string(i) + " (" + block_name(c.block) + "[" +
         std::to_string(c.local) + "])";
}

double dual_alpha(double gradient, double lipschitz, DualStep dual) {
  // gradient = -residual
  return dual == DualStep::ascent ? gradient / lipschitz : -gradient / lipschitz;
}

void apply(std::span<double> xi, int i, double alpha, Coordinate c) {
  const double next = xi[i] + alpha;
  if (!std::isfinite(next)) throw NumericError("non-finite iterate at " + describe(i, c));
  xi[i] = next;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu must be positive");
  if (!(mu <= mu_max)) throw ValidationError("mu exceeds mu_max (" + std::to_string(mu_max) + ")");
  if (budget < 0) throw ValidationError("budget must be non-negative");
  if (lipschitz && !(*lipschitz > 0.0 && std::isfinite(*lipschitz)))
    throw ValidationError("L must be positive and finite");
  if (!(lipschitz_floor > 0.0)) throw ValidationError("Lipschitz floor must be positive");
  if (!(lipschitz_safety >= 1.0)) throw ValidationError("Lipschitz safety factor must be >= 1");
}

FlopTally coordinate_flops(const Formulation& f, int i) {
  if (f.is_frozen(i)) return {};
  const std::int64_t n = f.n();
  const std::int64_t ng = f.ng();
  const std::int64_t p = f.matrices.p;
  const Coordinate c = f.layout.locate(i);
  switch (c.block) {
    case Block::x:
      return {16 * (n + ng) * p + 58 * ng + 51 * n - 8, 3};
    case Block::t:
    case Block::g:
      if (f.gen_of[c.local] < 0) return {};
      return {8 * p + 38, 3};
    case Block::h:
      return {14, 0};
    case Block::z:
      return {16, 0};
    default:
      return {};
  }
}

CoordinateStep coord_update_exact(std::span<double> xi, int i, double mu,
                                  const ProblemInstance& inst, const BoxSet& box, double lipschitz,
                                  DualStep dual) {
  const Formulation& f = inst.f();
  CoordinateStep step{0.0, coordinate_flops(f, i)};
  if (f.is_frozen(i)) return step;
  const Coordinate c = f.layout.locate(i);
  if (is_multiplier(c.block)) {
    step.alpha = dual_alpha(coord_gradient(xi, mu, inst, i), lipschitz, dual);
  } else if (box.degenerate(i)) {
    step.alpha = box.lo[i] - xi[i];
  } else {
    const Poly4 p = coord_restriction(xi, mu, inst, i);
    step.alpha = minimize_univariate(p, box.lo[i] - xi[i], box.hi[i] - xi[i], describe(i, c)).argmin;
  }
  apply(xi, i, step.alpha, c);
  return step;
}

CoordinateStep coord_update_prox(std::span<double> xi, int i, double mu,
                                 const ProblemInstance& inst, const BoxSet& box, double lipschitz,
                                 DualStep dual) {
  const Formulation& f = inst.f();
  CoordinateStep step{0.0, coordinate_flops(f, i)};
  if (f.is_frozen(i)) return step;
  const Coordinate c = f.layout.locate(i);
  const double grad = coord_gradient(xi, mu, inst, i);
  if (is_multiplier(c.block))
    step.alpha = dual_alpha(grad, lipschitz, dual);
  else
    step.alpha = std::clamp(xi[i] - grad / lipschitz, box.lo[i], box.hi[i]) - xi[i];
  apply(xi, i, step.alpha, c);
  return step;
}

FlopTally epoch(std::span<double> xi, double mu, const ProblemInstance& inst, const BoxSet& box,
                const SolverConfig& config, double lipschitz) {
  FlopTally tally;
  const Formulation& f = inst.f();
  for (int i = 0; i < f.layout.size(); ++i) {
    if (f.is_frozen(i)) continue;
    const CoordinateStep s = config.mode == UpdateMode::exact
                                 ? coord_update_exact(xi, i, mu, inst, box, lipschitz, config.dual)
                                 : coord_update_prox(xi, i, mu, inst, box, lipschitz, config.dual);
    tally += s.flops;
  }
  return tally;
}

double max_curvature(std::span<const double> xi, double mu, const ProblemInstance& inst) {
  const Formulation& f = inst.f();
  double best = 0.0;
  for (int i = 0; i < f.layout.size(); ++i) {
    if (f.is_frozen(i)) continue;
    best = std::max(best, std::abs(coord_curvature(xi, mu, inst, i)));
  }
  return best;
}

CoordinateDescent::CoordinateDescent(const ProblemInstance& inst, SolverConfig config,
                                     std::vector<double> start)
    : inst_(inst), config_(std::move(config)), box_(make_box(inst)), rng_(config_.seed) {
  config_.validate();
  const int d = inst_.f().layout.size();
  if (start.empty()) {
    xi_ = initial_state(inst_);
  } else {
    if (static_cast<int>(start.size()) != d)
      throw ValidationError("start vector has " + std::to_string(start.size()) +
                            " entries, expected " + std::to_string(d));
    xi_ = projected(std::move(start), box_);
  }
  for (int i = 0; i < d; ++i)
    if (!inst_.f().is_frozen(i)) free_.push_back(i);
  refresh_lipschitz();
}

void CoordinateDescent::set_instance(const ProblemInstance& inst) {
  if (inst.formulation.get() != inst_.formulation.get() &&
      inst.f().layout.size() != inst_.f().layout.size())
    throw ValidationError("instance belongs to a different network");
  inst_ = inst;
  box_ = make_box(inst_);
  project_box(xi_, box_);
}

void CoordinateDescent::refresh_lipschitz() {
  if (config_.lipschitz) {
    lipschitz_ = *config_.lipschitz;
    return;
  }
  lipschitz_ = std::max(config_.lipschitz_floor,
                        config_.lipschitz_safety * max_curvature(xi_, config_.mu, inst_));
}

void CoordinateDescent::run(std::int64_t updates, std::vector<double>* trace,
                            std::vector<int>* coordinates) {
  if (free_.empty()) return;
  const auto d_free = static_cast<std::int64_t>(free_.size());
  std::uniform_int_distribution<size_t> pick(0, free_.size() - 1);
  for (std::int64_t u = 0; u < updates; ++u) {
    if (updates_ > 0 && updates_ % d_free == 0) refresh_lipschitz();
    const int i = free_[pick(rng_)];
    const CoordinateStep s =
        config_.mode == UpdateMode::exact
            ? coord_update_exact(xi_, i, config_.mu, inst_, box_, lipschitz_, config_.dual)
            : coord_update_prox(xi_, i, config_.mu, inst_, box_, lipschitz_, config_.dual);
    flops_ += s.flops;
    ++updates_;
    if (coordinates) coordinates->push_back(i);
    if (trace) trace->push_back(lagrangian());
  }
}

double CoordinateDescent::lagrangian() const { return eval_lagrangian(xi_, config_.mu, inst_); }

void CoordinateDescent::recover() {
  const std::vector<double> flat = initial_state(inst_);
  for (size_t i = 0; i < xi_.size(); ++i)
    if (!std::isfinite(xi_[i])) xi_[i] = flat[i];
  project_box(xi_, box_);
}

Trajectory solve_static(const ProblemInstance& inst, const SolverConfig& config,
                        std::int64_t updates, std::vector<double> start) {
  CoordinateDescent cd(inst, config, std::move(start));
  Trajectory out;
  out.lagrangian.push_back(cd.lagrangian());
  cd.run(updates, &out.lagrangian, &out.coordinates);
  out.state = cd.state();
  out.flops = cd.flops();
  return out;
}

}  // namespace tvopf
