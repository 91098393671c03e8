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
#include <span>
#include <vector>

#include "tvopf/lifted.hpp"

namespace tvopf {

/// Coordinate-wise Lipschitz estimate on the ball B_r(center): the largest
/// |d^2 L / d xi_i^2| over the center and `samples` uniform points of the
/// ball (free coordinates only), times 1.1.
double estimate_lipschitz(std::span<const double> center, double radius, double mu,
                          const ProblemInstance& inst, int samples, std::uint64_t seed = 0);

/// D_chi(xi, L) / 2 from the local proximal PL inequality. xi must lie in
/// the box; the separable prox subproblem is solved exactly per coordinate.
double pl_gap(std::span<const double> xi, double lipschitz, double mu,
              const ProblemInstance& inst, const BoxSet& box);

/// max over the sample states of |L^k(xi) - L^{k-1}(xi)|. A lower bound on
/// the drift constant e, which is a supremum over the whole box.
double estimate_drift(const ProblemInstance& current, const ProblemInstance& previous, double mu,
                      std::span<const std::vector<double>> samples);

}  // namespace tvopf
