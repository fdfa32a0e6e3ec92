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

#ifndef ARENA_ELO_H_
#define ARENA_ELO_H_

#include <map>
#include <span>
#include <utility>

#include "arena/model.h"

namespace arena {

struct EloConfig {
  double alpha = 400.0;  // logistic spread
  double k_factor = 32.0;
  double initial_rating = 1000.0;
};

// Probability that a player rated `r_i` beats one rated `r_j`:
// 1 / (1 + 10^((r_j - r_i) / alpha)).
double EloExpected(double r_i, double r_j, double alpha);

// One online update for a game scored `s` (1, 0.5 or 0) from i's side.
// Returns the new (r_i, r_j); the rating sum is conserved.
std::pair<double, double> EloUpdate(double r_i, double r_j, double s,
                                    const EloConfig& config);

// Replays battles in order, starting each model at initial_rating on first
// appearance. The result depends on battle order.
std::map<ModelId, double> EloRun(std::span<const BattleRecord> battles,
                                 const EloConfig& config);

}  // namespace arena

#endif  // ARENA_ELO_H_
