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
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "tvopf/lifted.hpp"

namespace tvopf {

enum class UpdateMode {
  exact,  // exact univariate minimization (quartic / quadratic)
  prox,  // box-projected gradient step with step 1/L
};

/// Multiplier step. L is linear in every lambda, so both variants take a
/// gradient step of length |residual| / L and differ in sign only.
enum class DualStep {
  ascent,  // lambda <- lambda - residual / L (drives residuals to zero)
  literal,  // lambda <- lambda + residual / L (prox step on L itself; unstable)
};

struct SolverConfig {
  double mu = 1.0;
  double mu_max = 10.0;
  UpdateMode mode = UpdateMode::exact;
  DualStep dual = DualStep::ascent;
  std::uint64_t seed = 0;
  std::int64_t budget = 1;  // coordinate updates per time step
  std::optional<double> lipschitz;  // fixed L; auto when empty
  double lipschitz_floor = 1e-9;
  double lipschitz_safety = 1.1;

  void validate() const;
};

struct FlopTally {
  std::int64_t flops = 0;
  std::int64_t root_evaluations = 0;

  FlopTally& operator+=(const FlopTally& o) {
    flops += o.flops;
    root_evaluations += o.root_evaluations;
    return *this;
  }
  friend bool operator==(const FlopTally&, const FlopTally&) = default;
};

/// BSS-model charge for updating coordinate i, per coordinate class: an x
/// entry costs 16(N+N_G)p + 58N_G + 51N - 8 flops, a generator t or g entry
/// 8p + 38, h 14, z 16, each plus three cubic-root evaluations for the quartic
/// classes (x, generator t/g). Pinned t/g, frozen entries and multipliers are
/// free. Summed over an epoch this reproduces flop_counts().per_epoch.
FlopTally coordinate_flops(const Formulation& f, int i);

struct CoordinateStep {
  double alpha = 0.0;
  FlopTally flops;
};

/// Exact minimization of L + chi along coordinate i (multipliers get the
/// dual step instead). Modifies xi in place.
CoordinateStep coord_update_exact(std::span<double> xi, int i, double mu,
                                  const ProblemInstance& inst, const BoxSet& box, double lipschitz,
                                  DualStep dual = DualStep::ascent);

/// Prox-linear step: clamp(xi_i - grad_i / L) for primal coordinates.
CoordinateStep coord_update_prox(std::span<double> xi, int i, double mu,
                                 const ProblemInstance& inst, const BoxSet& box, double lipschitz,
                                 DualStep dual = DualStep::ascent);

/// Visits every non-frozen coordinate once in increasing order.
FlopTally epoch(std::span<double> xi, double mu, const ProblemInstance& inst, const BoxSet& box,
                const SolverConfig& config, double lipschitz);

/// max_i |d^2 L / d xi_i^2| over non-frozen coordinates at xi.
double max_curvature(std::span<const double> xi, double mu, const ProblemInstance& inst);

/// Randomized coordinate descent state: iterate, RNG, update counter and
/// the current Lipschitz estimate. Shared by static solves and tracking so
/// that both consume the random stream identically.
class CoordinateDescent {
 public:
  CoordinateDescent(const ProblemInstance& inst, SolverConfig config,
                    std::vector<double> start = {});

  /// Switches to a new instance snapshot and projects the iterate onto its box.
  void set_instance(const ProblemInstance& inst);

  /// Runs `updates` randomized coordinate updates. If `trace` is non-null the
  /// Lagrangian after every update is appended to it.
  void run(std::int64_t updates, std::vector<double>* trace = nullptr,
           std::vector<int>* coordinates = nullptr);

  [[nodiscard]] const std::vector<double>& state() const { return xi_; }
  [[nodiscard]] const ProblemInstance& instance() const { return inst_; }
  [[nodiscard]] const BoxSet& box() const { return box_; }
  [[nodiscard]] double lipschitz() const { return lipschitz_; }
  [[nodiscard]] std::int64_t updates() const { return updates_; }
  [[nodiscard]] const FlopTally& flops() const { return flops_; }
  [[nodiscard]] int free_coordinates() const { return static_cast<int>(free_.size()); }
  [[nodiscard]] double lagrangian() const;

  /// Replaces non-finite entries by the flat start and re-projects.
  void recover();

 private:
  void refresh_lipschitz();

  ProblemInstance inst_;
  SolverConfig config_;
  BoxSet box_;
  std::vector<double> xi_;
  std::vector<int> free_;
  std::mt19937_64 rng_;
  double lipschitz_ = 1.0;
  std::int64_t updates_ = 0;
  FlopTally flops_;
};

struct Trajectory {
  std::vector<double> lagrangian;  // [0] is the start, then one per update
  std::vector<int> coordinates;
  std::vector<double> state;
  FlopTally flops;
};

/// Randomized coordinate descent on a fixed instance for `updates` updates.
Trajectory solve_static(const ProblemInstance& inst, const SolverConfig& config,
                        std::int64_t updates, std::vector<double> start = {});

}  // namespace tvopf
