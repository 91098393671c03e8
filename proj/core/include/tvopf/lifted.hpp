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
#include <span>
#include <vector>

#include "tvopf/admittance.hpp"
#include "tvopf/network.hpp"
#include "tvopf/polynomial.hpp"

namespace tvopf {

// The lifted decision vector is
//   xi = (x, t, g, h, z, lambda_t, lambda_g, lambda_h, lambda_z)
// with x in R^{2N} (real parts stacked on imaginary parts), t, g, h,
// lambda_t, lambda_g, lambda_h in R^N and z, lambda_z in R^{N_G}, so that
// d = 8N + 2N_G.

enum class Block { x, t, g, h, z, lambda_t, lambda_g, lambda_h, lambda_z };

struct Coordinate {
  Block block;
  int local;  // position inside the block
};

class StateLayout {
 public:
  StateLayout() = default;
  StateLayout(int n, int ng);

  [[nodiscard]] int buses() const { return n_; }
  [[nodiscard]] int generators() const { return ng_; }
  [[nodiscard]] int size() const { return 8 * n_ + 2 * ng_; }
  [[nodiscard]] int offset(Block b) const;
  [[nodiscard]] int length(Block b) const;
  [[nodiscard]] int index(Block b, int local) const { return offset(b) + local; }
  [[nodiscard]] Coordinate locate(int i) const;

 private:
  int n_ = 0;
  int ng_ = 0;
};

/// Unpacked view of a lifted vector, one std::vector per block.
struct LiftedComponents {
  std::vector<double> x, t, g, h, z, lambda_t, lambda_g, lambda_h, lambda_z;
};

LiftedComponents unpack(const StateLayout& layout, std::span<const double> xi);
std::vector<double> pack(const StateLayout& layout, const LiftedComponents& parts);

/// Network plus slack treatment plus constant matrices; shared, immutable.
struct Formulation {
  NetworkModel model;
  SlackMode mode = SlackMode::embedded;
  ConstantMatrices matrices;
  StateLayout layout;
  std::vector<int> bus_of;  // modeled bus -> model bus index
  std::vector<int> gen_of;  // modeled bus -> modeled generator, or -1
  std::vector<int> gen_bus;  // modeled generator -> modeled bus
  std::vector<int> gen_model;  // modeled generator -> model generator index
  int slack_position = -1;  // modeled index of the slack (embedded mode)

  [[nodiscard]] int n() const { return layout.buses(); }
  [[nodiscard]] int ng() const { return layout.generators(); }
  /// Lifted coordinates that never move (slack x entries in embedded mode).
  [[nodiscard]] std::vector<int> frozen() const;
  [[nodiscard]] bool is_frozen(int i) const;
};

std::shared_ptr<const Formulation> make_formulation(NetworkModel model,
                                                    SlackMode mode = SlackMode::embedded);

/// One time step's data on top of a formulation. Loads are indexed by modeled
/// bus, availability by modeled generator; all pu.
struct ProblemInstance {
  std::shared_ptr<const Formulation> formulation;
  std::vector<double> pl, ql, pav;
  double timestamp = 0.0;

  [[nodiscard]] const Formulation& f() const { return *formulation; }
};

/// Instance from full-model vectors (pl/ql per model bus, pav per model
/// generator); entries of the dropped slack bus / generator are ignored.
ProblemInstance make_instance(std::shared_ptr<const Formulation> f, std::span<const double> pl,
                              std::span<const double> ql, std::span<const double> pav,
                              double timestamp = 0.0);

/// Instance with the case file's static loads and availability.
ProblemInstance static_instance(std::shared_ptr<const Formulation> f);

/// Per-coordinate bounds of the feasible box Y; pins and frozen coordinates
/// are degenerate intervals.
struct BoxSet {
  std::vector<double> lo, hi;

  [[nodiscard]] bool contains(std::span<const double> xi) const;
  [[nodiscard]] bool degenerate(int i) const { return lo[i] == hi[i]; }
};

BoxSet make_box(const ProblemInstance& inst);

/// Coordinate-wise clamp onto the box (the Euclidean projection).
void project_box(std::span<double> xi, const BoxSet& box);
std::vector<double> projected(std::vector<double> xi, const BoxSet& box);

/// Flat start (V = 1 at every free bus, slack at its set point), auxiliary
/// variables at their defining values, multipliers zero, then projected.
std::vector<double> initial_state(const ProblemInstance& inst);

/// Augmented Lagrangian value. Throws NumericError if the result is not finite.
double eval_lagrangian(std::span<const double> xi, double mu, const ProblemInstance& inst);

/// L(xi + a e_i) - L(xi) as a polynomial in a (degree <= 4, zero constant).
Poly4 coord_restriction(std::span<const double> xi, double mu, const ProblemInstance& inst,
                        int i);

double coord_gradient(std::span<const double> xi, double mu, const ProblemInstance& inst, int i);
double coord_curvature(std::span<const double> xi, double mu, const ProblemInstance& inst, int i);

struct Residuals {
  std::vector<double> t, g, h, z;
};

Residuals residuals(std::span<const double> xi, const ProblemInstance& inst);

struct Metrics {
  double cost = 0.0;
  double infeasibility = 0.0;  // T
  double infeasibility_lower = 0.0;  // T', drops non-generator t/g terms
  std::vector<double> vmag;  // |V| per modeled bus
};

Metrics eval_metrics(std::span<const double> xi, const ProblemInstance& inst);

}  // namespace tvopf
