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

namespace tvopf {

/// Operation counts of one coordinate-descent epoch in the BSS model
/// (one flop per add/sub/mul/div/compare, a cubic solve at 31 flops).
struct FlopCounts {
  std::int64_t per_epoch = 0;  // excluding the cubic-root evaluations
  std::int64_t root_evaluations = 0;  // cubic-root evaluations per epoch
  std::int64_t per_coordinate_max = 0;  // worst single update, roots included
  std::int64_t cubic_root_flops = 31;
};

/// Closed-form counts for N buses, N_G generators and max row nonzeros p.
FlopCounts flop_counts(std::int64_t n, std::int64_t ng, std::int64_t p);

struct BoundInputs {
  double sigma_l = 0.0;  // L^0(xi^0) - L^{*,0}
  double sigma_p = 0.0;  // d L / sigma_L
  double drift = 0.0;  // e
  double target_error = 0.0;  // E_k
  std::int64_t n = 0;
  std::int64_t ng = 0;
  std::int64_t p = 1;
};

struct BudgetResult {
  double flops = 0.0;
  bool non_positive = false;  // the formula itself went <= 0
};

/// Flops between two input updates that keep the expected error below
/// E_k:  C(N, N_G, p) * log(E_k - 2 e sigma_p) / log(sigma_l).
/// Throws ValidationError unless sigma_l > 1 and E_k > 2 e sigma_p.
BudgetResult budget_for_error(const BoundInputs& in);

}  // namespace tvopf
