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

#include <string>
#include <vector>

#include "arena/simulator.h"
#include "arena/style_features.h"
#include "benchmark/benchmark.h"

namespace arena {
namespace {

void BM_ExtractFeatures(benchmark::State& state) {
  const std::string text = SynthesizeResponse({.response_length = state.range(0),
                                               .lists_count = 4,
                                               .headers_count = 2,
                                               .emphasis_count = 3,
                                               .has_gps_output = true});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExtractFeatures(text));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ExtractFeatures)->Arg(50)->Arg(200)->Arg(1000);

void BM_SynthesizeResponse(benchmark::State& state) {
  const StyleFeatures target{.response_length = state.range(0), .lists_count = 3,
                             .headers_count = 1, .emphasis_count = 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(SynthesizeResponse(target));
  }
}
BENCHMARK(BM_SynthesizeResponse)->Arg(200);

}  // namespace
}  // namespace arena
