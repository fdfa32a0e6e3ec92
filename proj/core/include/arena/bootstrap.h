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

#ifndef ARENA_BOOTSTRAP_H_
#define ARENA_BOOTSTRAP_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "arena/bradley_terry.h"

namespace arena {

struct BootstrapOptions {
  int rounds = 100;
  double confidence = 0.95;
  uint64_t seed = 0;
  // Worker threads for the refits. Results do not depend on this value.
  int threads = 1;
};

struct BootstrapInterval {
  double lower = 0.0;
  double upper = 0.0;
  // Number of resamples in which the model received a rating.
  int appearances = 0;
};

struct BootstrapResult {
  std::map<ModelId, BootstrapInterval> intervals;
  int rounds = 0;
  std::vector<std::string> warnings;
};

// Percentile-bootstrap intervals: each round resamples the battle list with
// replacement (same size), refits, and the per-model interval spans the
// (1 - confidence)/2 and 1 - (1 - confidence)/2 empirical quantiles (linear
// interpolation between order statistics). Round r draws from a generator
// seeded by (seed, r), so results are reproducible for a given seed.
//
// With non-empty `features` the refits are style-controlled.
absl::StatusOr<BootstrapResult> BootstrapConfidenceIntervals(
    std::span<const BattleRecord> battles, const BTConfig& config,
    const BootstrapOptions& options, std::span<const StyleVector> features = {});

// Linear-interpolation quantile of `values` (need not be sorted), q in [0, 1].
double Quantile(std::vector<double> values, double q);

}  // namespace arena

#endif  // ARENA_BOOTSTRAP_H_
