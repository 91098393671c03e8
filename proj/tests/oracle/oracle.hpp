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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tvopf/lifted.hpp"
#include "tvopf/network.hpp"

namespace tvopf::oracle {

using Complex = std::complex<double>;

/// Dense bus admittance from the line list, assembled entry by entry.
std::vector<std::vector<Complex>> dense_admittance(const NetworkModel& model);

/// Complex power injections S_i = V_i conj(sum_k Y_ik V_k) for all buses.
std::vector<Complex> injections(const NetworkModel& model, std::span<const Complex> v);

/// Full bus voltage vector for a lifted state (slack taken from the set point
/// in folded mode).
std::vector<Complex> voltages(const ProblemInstance& inst, std::span<const double> xi);

/// Augmented Lagrangian recomputed from complex power flow.
double lagrangian(std::span<const double> xi, double mu, const ProblemInstance& inst);

/// f'(0) of a <= quartic restriction via the five-point stencil, which is
/// exact for quartics up to rounding.
double five_point_derivative(std::span<const double> xi, double mu, const ProblemInstance& inst, int i,
                             double step);

/// Global optimum of the 2-bus problem (slack generator at modeled bus 0,
/// pinned load at modeled bus 1), by Newton multistart on the power-flow
/// equations of the load bus over a polar grid of starting points.
struct TwoBusOptimum {
  bool feasible = false;
  double cost = 0.0;  // equals L at the optimum
  std::vector<double> xi;  // full lifted optimum, multipliers included
  int solutions = 0;  // distinct power-flow solutions found
};

TwoBusOptimum two_bus_optimum(const ProblemInstance& inst);

/// Lifted point with zero residuals for an N-bus instance: solves the power
/// flow with every non-slack bus at the given injection (generator buses at
/// `gen_injection`, others at -load). Returns empty if Newton fails.
std::vector<double> feasible_point(const ProblemInstance& inst, std::span<const Complex> gen_injection);

/// Random lifted vector around a plausible operating point.
std::vector<double> random_state(const ProblemInstance& inst, std::uint64_t seed);

}  // namespace tvopf::oracle
