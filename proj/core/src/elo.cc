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

#include "arena/elo.h"

#include <cmath>

namespace arena {

double EloExpected(double r_i, double r_j, double alpha) {
  return 1.0 / (1.0 + std::pow(10.0, (r_j - r_i) / alpha));
}

std::pair<double, double> EloUpdate(double r_i, double r_j, double s,
                                    const EloConfig& config) {
  const double expected_i = EloExpected(r_i, r_j, config.alpha);
  // E(j, i) is computed as the complement so the two deltas cancel exactly.
  const double delta = config.k_factor * (s - expected_i);
  return {r_i + delta, r_j - delta};
}

std::map<ModelId, double> EloRun(std::span<const BattleRecord> battles,
                                 const EloConfig& config) {
  std::map<ModelId, double> ratings;
  for (const BattleRecord& b : battles) {
    auto [a_it, a_new] = ratings.try_emplace(b.model_a, config.initial_rating);
    auto [b_it, b_new] = ratings.try_emplace(b.model_b, config.initial_rating);
    auto [ra, rb] =
        EloUpdate(a_it->second, b_it->second, ScoreForA(b.outcome), config);
    a_it->second = ra;
    b_it->second = rb;
  }
  return ratings;
}

}  // namespace arena
