// Copyright 2026 The hvtsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "hvtsim/bohm.hpp"
#include "hvtsim/harness.hpp"
#include "hvtsim/models.hpp"
#include "hvtsim/twospin.hpp"

namespace hvtsim {
namespace {

void BM_MeasureInto(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  const std::vector<Direction> reg{Direction::plus_z()};
  const DirectionGrid grid = DirectionGrid::build(kDefaultGridSize, reg);
  ModelOptions o;
  o.grid = &grid;
  const ModelState model = make_model(kind, Preparation::x_up(), o);
  const Device dev = make_device(Direction::plus_z(), &grid);
  const std::uint64_t key = Rng::stream_key(42, 0);
  ModelState post = model;
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng = Rng::at(key, i++);
    benchmark::DoNotOptimize(measure_into(model, dev, rng, post));
  }
  state.SetLabel(std::string(model_label(kind)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MeasureInto)
    ->Arg(static_cast<int>(ModelKind::kQuantum))
    ->Arg(static_cast<int>(ModelKind::kExclusive))
    ->Arg(static_cast<int>(ModelKind::kIndependent))
    ->Arg(static_cast<int>(ModelKind::kBellLambda));

void BM_RepeatExperiment(benchmark::State& state) {
  ExperimentSpec s;
  s.model = ModelKind::kIndependent;
  s.devices = {Direction::plus_z(), Direction::plus_x()};
  s.trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_repeat(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RepeatExperiment)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BohmEvolve(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    const XiSquared xi = bohm_draw_xi(rng);
    benchmark::DoNotOptimize(bohm_evolve(BohmState{0.25, 0.75, xi.first, xi.second, 1.0}, {}, false));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BohmEvolve)->Unit(benchmark::kMicrosecond);

void BM_MeasureJoint(benchmark::State& state) {
  const Direction a = Direction::from_angles(0.3, 0.0);
  const Direction b = Direction::from_angles(1.9, 0.0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng = Rng::for_trial(42, 0, i++);
    benchmark::DoNotOptimize(measure_joint(IhvtPair{}, a, b, rng));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MeasureJoint);

}  // namespace
}  // namespace hvtsim

BENCHMARK_MAIN();
