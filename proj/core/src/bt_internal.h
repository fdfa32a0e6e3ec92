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

#ifndef ARENA_SRC_BT_INTERNAL_H_
#define ARENA_SRC_BT_INTERNAL_H_

#include <span>
#include <vector>

#include "arena/bradley_terry.h"

namespace arena::internal {

// Battles with models mapped to dense indices (sorted by canonical id).
struct IndexedBattles {
  std::vector<ModelId> models;
  std::vector<int> first;
  std::vector<int> second;
  std::vector<Outcome> outcomes;

  std::size_t size() const { return outcomes.size(); }
};

IndexedBattles IndexBattles(std::span<const BattleRecord> battles);

// Fits the battles weighted by `multiplicity` (one count per battle; empty
// means every battle once). `features` is empty for a plain fit, otherwise
// one vector per battle.
BTFitResult FitIndexed(const IndexedBattles& battles,
                       std::span<const int> multiplicity,
                       std::span<const StyleVector> features,
                       const BTConfig& config);

}  // namespace arena::internal

#endif  // ARENA_SRC_BT_INTERNAL_H_
