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

#include "tvopf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tvopf/error.hpp"
#include "tvopf/solver.hpp"

namespace tvopf {

double estimate_lipschitz(std::span<const double> center, double radius, double mu,
                          const ProblemInstance& inst, int samples, std::uint64_t seed) {
  if (!(radius >= 0.0)) throw ValidationError("radius must be non-negative");
  const Formulation& f = inst.f();
  std::vector<int> free;
  for (int i = 0; i < f.layout.size(); ++i)
    if (!f.is_frozen(i)) free.push_back(i);

  double best = max_curvature(center, mu, inst);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  std::vector<double> point(center.begin(), center.end());
  for (int s = 0; s < samples && !free.empty(); ++s) {
    std::vector<double> dir(free.size());
    double norm = 0.0;
    for (double& v : dir) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(free.size()));
    std::copy(center.begin(), center.end(), point.begin());
    for (size_t k = 0; k < free.size(); ++k) point[free[k]] += r * dir[k] / norm;
    best = std::max(best, max_curvature(point, mu, inst));
  }
  return 1.1 * best;
}

double pl_gap(std::span<const double> xi, double lipschitz, double mu, const ProblemInstance& inst,
              const BoxSet& box) {
  if (!(lipschitz > 0.0)) throw ValidationError("L must be positive");
  double value = 0.0;
  for (int i = 0; i < static_cast<int>(xi.size()); ++i) {
    const double g = coord_gradient(xi, mu, inst, i);
    const double a = std::clamp(xi[i] - g / lipschitz, box.lo[i], box.hi[i]) - xi[i];
    value += g * a + 0.5 * lipschitz * a * a;
  }
  return std::max(0.0, -lipschitz * value);
}

double estimate_drift(const ProblemInstance& current, const ProblemInstance& previous, double mu,
                      std::span<const std::vector<double>> samples) {
  if (current.f().layout.size() != previous.f().layout.size())
    throw ValidationError("drift needs instances on the same network");
  double best = 0.0;
  for (const auto& xi : samples)
    best = std::max(best, std::abs(eval_lagrangian(xi, mu, current) - eval_lagrangian(xi, mu, previous)));
  return best;
}

}  // namespace tvopf
