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

#include "tvopf/flops.hpp"

#include <cmath>
#include <string>

#include "tvopf/error.hpp"

namespace tvopf {

FlopCounts flop_counts(std::int64_t n, std::int64_t ng, std::int64_t p) {
  if (!(n >= ng && ng >= 0 && p >= 1))
    throw ValidationError("flop_counts needs N >= N_G >= 0 and p >= 1");
  FlopCounts out;
  out.per_epoch = (32 * p + 102) * n * n + (32 * p + 116) * ng * n - 2 * n + (16 * p + 92) * ng;
  out.root_evaluations = 6 * (n + ng);
  out.per_coordinate_max = 16 * (n + ng) * p + 58 * ng + 144 * n - 8;
  out.cubic_root_flops = 31;
  return out;
}

BudgetResult budget_for_error(const BoundInputs& in) {
  if (!(in.sigma_l > 1.0)) throw ValidationError("budget_for_error: requires sigma_l > 1");
  const double floor = 2.0 * in.drift * in.sigma_p;
  if (!(in.target_error > floor))
    throw ValidationError("budget_for_error: requires E_k > 2 e sigma_p (" +
                          std::to_string(in.target_error) + " <= " + std::to_string(floor) + ")");
  const double per_update = static_cast<double>(flop_counts(in.n, in.ng, in.p).per_coordinate_max);
  BudgetResult r;
  r.flops = per_update * std::log(in.target_error - floor) / std::log(in.sigma_l);
  r.non_positive = !(r.flops > 0.0);
  return r;
}

}  // namespace tvopf
