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

#include "arena/leaderboard.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "arena/format.h"
#include "json_codec.h"

namespace arena {

std::vector<StyleVector> BattleStyleDifferences(
    std::span<const BattleRecord> battles) {
  std::vector<StyleVector> out;
  out.reserve(battles.size());
  for (const BattleRecord& b : battles) {
    out.push_back(FeatureDifference(ExtractFeatures(b.response_a),
                                    ExtractFeatures(b.response_b)));
  }
  return out;
}

absl::StatusOr<Leaderboard> ComputeLeaderboard(
    std::span<const BattleRecord> battles, const BTConfig& config,
    const LeaderboardOptions& options) {
  if (battles.empty()) {
    return absl::FailedPreconditionError("insufficient data: no battles");
  }
  std::vector<StyleVector> features;
  if (options.style_control) features = BattleStyleDifferences(battles);

  absl::StatusOr<BTFitResult> fit =
      options.style_control ? FitBradleyTerryStyle(battles, features, config)
                            : FitBradleyTerry(battles, config);
  if (!fit.ok()) return fit.status();
  if (fit->ratings.size() < 2) {
    return absl::FailedPreconditionError(
        "insufficient data: fewer than 2 models with battles");
  }

  BootstrapOptions boot;
  boot.rounds = options.rounds;
  boot.confidence = options.confidence;
  boot.seed = options.seed;
  boot.threads = options.threads;
  auto intervals = BootstrapConfidenceIntervals(battles, config, boot, features);
  if (!intervals.ok()) return intervals.status();

  std::map<ModelId, int64_t> counts;
  for (const BattleRecord& b : battles) {
    ++counts[b.model_a];
    ++counts[b.model_b];
  }

  Leaderboard board;
  board.warnings = fit->warnings;
  board.warnings.insert(board.warnings.end(), intervals->warnings.begin(),
                        intervals->warnings.end());
  for (auto& [model, rating] : fit->ratings) {
    auto it = intervals->intervals.find(model);
    if (it != intervals->intervals.end()) {
      rating.ci_lower = it->second.lower;
      rating.ci_upper = it->second.upper;
    }
    LeaderboardEntry e{std::nullopt, model, rating.elo, rating.ci_lower,
                       rating.ci_upper, counts[model]};
    board.entries.push_back(e);
  }
  std::sort(board.entries.begin(), board.entries.end(),
            [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (*a.elo != *b.elo) return *a.elo > *b.elo;
              return a.model < b.model;
            });
  for (std::size_t i = 0; i < board.entries.size(); ++i) {
    board.entries[i].rank = static_cast<int>(i);
  }

  std::vector<ModelId> unrated;
  for (const ModelId& m : options.known_models) {
    if (!fit->ratings.contains(m)) unrated.push_back(m);
  }
  for (const ModelId& m : fit->excluded_models) unrated.push_back(m);
  std::sort(unrated.begin(), unrated.end());
  unrated.erase(std::unique(unrated.begin(), unrated.end()), unrated.end());
  for (const ModelId& m : unrated) {
    board.entries.push_back({std::nullopt, m, std::nullopt, std::nullopt,
                             std::nullopt, counts.contains(m) ? counts[m] : 0});
  }
  board.fit = *std::move(fit);
  return board;
}

namespace {

internal::Json OptionalNumber(const std::optional<double>& v) {
  return v ? internal::Json(*v) : internal::Json(nullptr);
}

std::string Fixed1(const std::optional<double>& v) {
  return v ? fmt::format("{:.1f}", *v) : std::string("-");
}

}  // namespace

std::string LeaderboardToJson(const Leaderboard& board) {
  internal::Json arr = internal::Json::array();
  for (const LeaderboardEntry& e : board.entries) {
    internal::Json row;
    row["rank"] = e.rank ? internal::Json(*e.rank) : internal::Json(nullptr);
    row["model"] = e.model.canonical();
    row["elo"] = OptionalNumber(e.elo);
    row["ci_lower"] = OptionalNumber(e.ci_lower);
    row["ci_upper"] = OptionalNumber(e.ci_upper);
    row["battles"] = e.battles;
    arr.push_back(std::move(row));
  }
  return arr.dump(2);
}

std::string LeaderboardToTable(const Leaderboard& board) {
  std::size_t width = 5;
  for (const LeaderboardEntry& e : board.entries) {
    width = std::max(width, e.model.canonical().size());
  }
  std::string out =
      fmt::format("{:<7}  {:<{}}  {:>10}  {:>13}  {:>13}\n", "Ranking", "Model",
                  width, "ELO Rating", "95% CI lower", "95% CI upper");
  for (const LeaderboardEntry& e : board.entries) {
    out += fmt::format("{:<7}  {:<{}}  {:>10}  {:>13}  {:>13}\n",
                       e.rank ? std::to_string(*e.rank) : "-",
                       e.model.canonical(), width, Fixed1(e.elo),
                       Fixed1(e.ci_lower), Fixed1(e.ci_upper));
  }
  return out;
}

std::string StyleCoefficientsToJson(const StyleVector& beta) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    obj[std::string(kStyleFeatureNames[k])] = beta[k];
  }
  return obj.dump(2);
}

std::string StyleCoefficientsToTable(const StyleVector& beta) {
  std::string header = "Features   ";
  std::string values = "Coefficient";
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    const std::size_t w = kStyleFeatureNames[k].size();
    header += fmt::format("  {:>{}}", kStyleFeatureNames[k], w);
    values += fmt::format("  {:>{}.3f}", beta[k], w);
  }
  return fmt::format("{}\n{}\n", header, values);
}

}  // namespace arena
