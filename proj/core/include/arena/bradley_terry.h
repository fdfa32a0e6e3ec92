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

#ifndef ARENA_BRADLEY_TERRY_H_
#define ARENA_BRADLEY_TERRY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "arena/model.h"
#include "arena/style_features.h"

namespace arena {

struct BTConfig {
  // Spread of the base-10 logistic law P(i > j) = 1 / (1 + 10^((R_j - R_i) /
  // alpha)). Used when generating battles from ratings; fitted ratings are
  // reported on the `scale` axis.
  double alpha = 400.0;
  // Elo points per factor of 10 in odds: Elo_i = scale * R_i + init_rating
  // where R_i is the fitted strength in base-10 log-odds units.
  double scale = 400.0;
  double init_rating = 1000.0;
  // When set, all ratings are shifted so this model sits at init_rating
  // exactly; otherwise each connected component is centred on init_rating.
  std::optional<ModelId> anchor_model;
  // Weight given to each direction of a tie. 0 drops ties.
  double tie_weight = 0.5;
  int max_iterations = 1000;
  // Convergence threshold on the Euclidean norm of the log-likelihood
  // gradient (natural-log odds parameters).
  double tolerance = 1e-8;
  // Ridge penalty 0.5 * l2_penalty * |theta|^2 on the natural-log strengths.
  double l2_penalty = 0.0;
};

absl::Status ValidateBTConfig(const BTConfig& config);

struct Rating {
  ModelId model;
  double elo = 0.0;
  std::optional<double> ci_lower;
  std::optional<double> ci_upper;
};

struct BTFitResult {
  std::map<ModelId, Rating> ratings;
  // Natural-log-odds effect per unit of normalized feature difference, in
  // kStyleFeatureNames order. Only set by FitBradleyTerryStyle().
  std::optional<StyleVector> style_coefficients;
  bool converged = false;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  double log_likelihood = 0.0;
  // Models that occur in the input but carry no comparison weight (for
  // example only ties with tie_weight == 0). They get no rating.
  std::vector<ModelId> excluded_models;
  int num_components = 0;
  std::vector<std::string> warnings;
};

// Maximum-likelihood Bradley-Terry fit. Each win adds weight 1 to the
// winner-over-loser pair and each tie adds tie_weight to both directions.
// The result does not depend on battle order.
//
// Errors: InvalidArgument for an empty battle list or a bad config.
// Disconnected comparison graphs and non-convergence are reported through
// warnings / `converged` rather than errors.
absl::StatusOr<BTFitResult> FitBradleyTerry(
    std::span<const BattleRecord> battles, const BTConfig& config);

// Style-controlled fit: the log-odds of A beating B are
// (theta_A - theta_B) + beta . x with x = features[k] for battle k. Feature
// columns that are constant across battles get beta = 0 and a warning.
absl::StatusOr<BTFitResult> FitBradleyTerryStyle(
    std::span<const BattleRecord> battles, std::span<const StyleVector> features,
    const BTConfig& config);

// One comparison row of the Bradley-Terry objective: weight `forward` on
// "first beats second", `backward` on the reverse, and optional covariates.
struct ComparisonRow {
  int first = 0;
  int second = 0;
  double forward = 0.0;
  double backward = 0.0;
  StyleVector features{};
};

// Penalized log-likelihood over parameters [theta_0 .. theta_{n-1},
// beta_0 .. beta_{f-1}] in natural-log odds:
//   sum_rows forward * log s(z) + backward * log s(-z) - 0.5 * l2 * |theta|^2
// with z = theta_first - theta_second + beta . features and s the logistic
// function. Exposed for gradient checks and diagnostics.
class BtObjective {
 public:
  BtObjective(int num_models, std::vector<ComparisonRow> rows,
              int num_features, double l2_penalty);

  int num_models() const { return num_models_; }
  int num_features() const { return num_features_; }
  int num_params() const { return num_models_ + num_features_; }
  const std::vector<ComparisonRow>& rows() const { return rows_; }

  double LogLikelihood(std::span<const double> params) const;
  std::vector<double> Gradient(std::span<const double> params) const;
  // Row-major num_params x num_params Hessian.
  std::vector<double> Hessian(std::span<const double> params) const;

 private:
  double Margin(const ComparisonRow& row, std::span<const double> params) const;

  int num_models_;
  std::vector<ComparisonRow> rows_;
  int num_features_;
  double l2_penalty_;
};

}  // namespace arena

#endif  // ARENA_BRADLEY_TERRY_H_
