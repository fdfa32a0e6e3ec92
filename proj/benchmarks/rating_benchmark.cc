// Copyright 2026 The Arena Authors.
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

#include <vector>

#include "arena/bootstrap.h"
#include "arena/bradley_terry.h"
#include "arena/leaderboard.h"
#include "arena/simulator.h"
#include "benchmark/benchmark.h"
#include "fmt/format.h"

namespace arena {
namespace {

// A world the size of the public deployment: 17 models, mild style bias.
SyntheticWorld BenchWorld() {
  SyntheticWorld world;
  for (int i = 0; i < 17; ++i) {
    world.models.push_back({.id = MustParseModelId(fmt::format("bench/m{:02d}", i)),
                            .true_elo = 800.0 + 25.0 * i,
                            .style = {.length_mean = 80.0 + 10.0 * (i % 5)}});
  }
  world.voter_style_bias = {0.5, 0.1, -0.15, -0.1, 0.05};
  world.tie_probability = 0.1;
  world.seed = 1;
  return world;
}

const std::vector<BattleRecord>& Battles(int64_t n) {
  static auto* cache = new std::map<int64_t, std::vector<BattleRecord>>();
  auto it = cache->find(n);
  if (it == cache->end()) it = cache->emplace(n, Simulate(BenchWorld(), n)).first;
  return it->second;
}

void BM_FitBradleyTerry(benchmark::State& state) {
  const auto& battles = Battles(state.range(0));
  const BTConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitBradleyTerry(battles, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitBradleyTerry)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_FitBradleyTerryStyle(benchmark::State& state) {
  const auto& battles = Battles(state.range(0));
  const std::vector<StyleVector> features = BattleStyleDifferences(battles);
  const BTConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitBradleyTerryStyle(battles, features, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitBradleyTerryStyle)->Arg(1000)->Arg(10000);

void BM_Bootstrap(benchmark::State& state) {
  const auto& battles = Battles(5000);
  const BTConfig config;
  const BootstrapOptions options{.rounds = 100, .threads = static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(BootstrapConfidenceIntervals(battles, config, options));
  }
}
BENCHMARK(BM_Bootstrap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace arena
