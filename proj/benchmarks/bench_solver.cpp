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

#include <benchmark/benchmark.h>

#include <random>

#include "tvopf/network.hpp"
#include "tvopf/polynomial.hpp"
#include "tvopf/solver.hpp"

namespace {

using namespace tvopf;

ProblemInstance synthetic_instance(int buses, int generators) {
  SyntheticCaseOptions o;
  o.buses = buses;
  o.generators = generators;
  o.seed = 11;
  return static_instance(make_formulation(make_synthetic_case(o)));
}

void BM_CubicRoots(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<std::array<double, 4>> coeffs(1024);
  for (auto& c : coeffs) c = {u(rng), u(rng), u(rng), u(rng)};
  size_t k = 0;
  for (auto _ : state) {
    const auto& c = coeffs[k++ & 1023];
    benchmark::DoNotOptimize(cubic_roots(c[0], c[1], c[2], c[3]));
  }
}
BENCHMARK(BM_CubicRoots);

void BM_CoordinateUpdate(benchmark::State& state) {
  const ProblemInstance inst = synthetic_instance(static_cast<int>(state.range(0)),
                                                  static_cast<int>(state.range(0) / 3));
  SolverConfig c;
  c.seed = 2;
  CoordinateDescent cd(inst, c);
  for (auto _ : state) cd.run(1);
  state.counters["flops_per_update"] =
      benchmark::Counter(static_cast<double>(cd.flops().flops) / static_cast<double>(cd.updates()));
}
BENCHMARK(BM_CoordinateUpdate)->Arg(10)->Arg(37)->Arg(118);

void BM_Epoch(benchmark::State& state) {
  const ProblemInstance inst = synthetic_instance(static_cast<int>(state.range(0)),
                                                  static_cast<int>(state.range(0) / 3));
  const BoxSet box = make_box(inst);
  auto xi = initial_state(inst);
  SolverConfig c;
  const double lipschitz = 1.1 * max_curvature(xi, c.mu, inst);
  std::int64_t flops = 0;
  for (auto _ : state) flops += epoch(xi, c.mu, inst, box, c, lipschitz).flops;
  state.counters["model_flops"] = benchmark::Counter(static_cast<double>(flops), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Epoch)->Arg(10)->Arg(37)->Arg(118)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
