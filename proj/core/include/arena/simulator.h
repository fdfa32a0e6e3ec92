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

#ifndef ARENA_SIMULATOR_H_
#define ARENA_SIMULATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "arena/bradley_terry.h"
#include "arena/model.h"
#include "arena/style_features.h"

namespace arena {

// Per-model distribution of response formatting. Length is normal (rounded,
// floored at the words the structural elements need); counts are Poisson.
struct StyleProfile {
  double length_mean = 120.0;
  double length_sd = 20.0;
  double lists_mean = 2.0;
  double headers_mean = 0.5;
  double emphasis_mean = 1.0;
  double gps_probability = 0.3;
};

struct SimulatedModel {
  ModelId id;
  double true_elo = 1000.0;
  StyleProfile style;
};

struct SyntheticWorld {
  std::vector<SimulatedModel> models;
  // Natural-log-odds weight per unit of normalized feature difference.
  StyleVector voter_style_bias{};
  double tie_probability = 0.0;
  double alpha = 400.0;
  uint64_t seed = 0;
  absl::Time start_time = absl::FromUnixSeconds(1735689600);  // 2025-01-01
};

absl::Status ValidateWorld(const SyntheticWorld& world);

// World spec JSON:
//   {"seed": 7, "alpha": 400, "tie_probability": 0.1,
//    "voter_style_bias": {"response_length": 0.5, ...} | [b0, ..., b4],
//    "models": [{"id": "p/m", "true_elo": 1200,
//                "style": {"length_mean": 150, "length_sd": 30, ...}}]}
// Errors name the offending field.
absl::StatusOr<SyntheticWorld> ParseWorldSpec(std::string_view json);

// Words needed by the structural elements alone.
int64_t MinimumLength(const StyleFeatures& target);

// Text whose ExtractFeatures() equals `target` exactly. Requires
// target.response_length >= max(1, MinimumLength(target)).
std::string SynthesizeResponse(const StyleFeatures& target);

// P(A wins | not a tie) under the world's law.
double WinProbability(double elo_a, double elo_b, double alpha,
                      const StyleVector& bias, const StyleVector& difference);

struct Simulation {
  std::vector<BattleRecord> battles;
  // Features drawn for (response_a, response_b) of each battle.
  std::vector<std::pair<StyleFeatures, StyleFeatures>> drawn;
};

// Deterministic in (world, n_battles).
Simulation SimulateDetailed(const SyntheticWorld& world, int64_t n_battles);
std::vector<BattleRecord> Simulate(const SyntheticWorld& world, int64_t n_battles);

struct RecoveryReport {
  // Truth expressed on the fit's scale: anchored at the anchor model, or
  // mean-centred when no anchor is configured.
  std::map<ModelId, double> truth;
  std::map<ModelId, double> plain;
  double plain_max_error = 0.0;
  double plain_mean_abs_error = 0.0;
  // Present when the world has a non-zero style bias.
  std::optional<std::map<ModelId, double>> style;
  std::optional<double> style_max_error;
  std::optional<double> style_mean_abs_error;
  std::optional<StyleVector> beta;
  std::optional<StyleVector> beta_error;  // recovered minus true
};

absl::StatusOr<RecoveryReport> RunRecovery(const SyntheticWorld& world,
                                           int64_t n_battles,
                                           const BTConfig& config);

// Human-readable truth summary: one line per model plus the bias vector.
std::string WorldSummary(const SyntheticWorld& world);

}  // namespace arena

#endif  // ARENA_SIMULATOR_H_
