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

#ifndef ARENA_LEADERBOARD_H_
#define ARENA_LEADERBOARD_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "arena/bootstrap.h"
#include "arena/bradley_terry.h"

namespace arena {

struct LeaderboardOptions {
  int rounds = 100;
  double confidence = 0.95;
  uint64_t seed = 0;
  int threads = 1;
  // Fit with style covariates extracted from each battle's two responses.
  bool style_control = false;
  // Models to list even without battles; they appear unranked, with no
  // rating, after the rated models.
  std::vector<ModelId> known_models;
};

struct LeaderboardEntry {
  std::optional<int> rank;  // 0-based; unset for unrated models
  ModelId model;
  std::optional<double> elo;
  std::optional<double> ci_lower;
  std::optional<double> ci_upper;
  int64_t battles = 0;
};

struct Leaderboard {
  std::vector<LeaderboardEntry> entries;  // elo descending, then unrated
  BTFitResult fit;
  std::vector<std::string> warnings;
};

// Bradley-Terry point estimates plus bootstrap intervals, sorted by rating.
// FailedPrecondition when fewer than two models can be rated.
absl::StatusOr<Leaderboard> ComputeLeaderboard(
    std::span<const BattleRecord> battles, const BTConfig& config,
    const LeaderboardOptions& options);

// Per-battle FeatureDifference(response_a, response_b).
std::vector<StyleVector> BattleStyleDifferences(
    std::span<const BattleRecord> battles);

// JSON array of {rank, model, elo, ci_lower, ci_upper, battles}; missing
// values are null.
std::string LeaderboardToJson(const Leaderboard& board);

// Fixed-width text table with columns
// Ranking | Model | ELO Rating | 95% CI lower | 95% CI upper.
std::string LeaderboardToTable(const Leaderboard& board);

// {"response_length": b0, "lists_count": b1, ...}
std::string StyleCoefficientsToJson(const StyleVector& beta);
std::string StyleCoefficientsToTable(const StyleVector& beta);

}  // namespace arena

#endif  // ARENA_LEADERBOARD_H_
