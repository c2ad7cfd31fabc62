// Copyright 2026 The fano-tunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/oracle.hpp"
#include "fano_tunnel/spectral.hpp"

using namespace fano_tunnel;

namespace {

ModelParams fig3() {
  ModelParams p;
  p.epsilon = 1.0;
  p.e0 = 40.0;
  p.eta_min = 0.0;
  p.eta_max = 81.0;
  p.g = CouplingFn::from_width(2.0);
  p.g_prime = CouplingFn::from_width(0.5);
  return p;
}

void BM_ClosedForm(benchmark::State& state) {
  const auto p = fig3();
  const TimeGrid grid{0.0, 20.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(p, grid, EvolutionMethod::ClosedForm));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClosedForm)->Arg(801)->Arg(8001);

void BM_Quadrature(benchmark::State& state) {
  const auto p = fig3();
  const TimeGrid grid{0.0, 20.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_quadrature(p, grid));
}
BENCHMARK(BM_Quadrature)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_Arrowhead(benchmark::State& state) {
  const auto m = discretize(fig3(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_arrowhead(m.level_a, m.bin_energies, m.bin_couplings_a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Arrowhead)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Oracle(benchmark::State& state) {
  const auto m = discretize(fig3(), static_cast<std::size_t>(state.range(0)));
  const TimeGrid grid{0.0, 10.0, 21};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_oracle(m, grid));
}
BENCHMARK(BM_Oracle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Resonance(benchmark::State& state) {
  const auto p = fig3();
  for (auto _ : state) benchmark::DoNotOptimize(SpectralSolution(p, Channel::A).total_weight());
}
BENCHMARK(BM_Resonance)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
