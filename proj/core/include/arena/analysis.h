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

#ifndef ARENA_ANALYSIS_H_
#define ARENA_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "arena/model.h"

namespace arena {

// Head-to-head statistics. Row i, column j reads "model i against model j".
struct PairwiseMatrix {
  // Ordered by average defined win rate (descending), ties by id.
  std::vector<ModelId> models;
  // wins_ij / (wins_ij + wins_ji), ties excluded; unset without decisive
  // battles between the pair.
  std::vector<std::vector<std::optional<double>>> win_rate;
  // All battles between the pair, ties included. Symmetric, zero diagonal.
  std::vector<std::vector<int64_t>> battle_count;
  // Decisive wins of row over column.
  std::vector<std::vector<int64_t>> wins;
  // Mean of the defined win rates in each row, in `models` order.
  std::vector<std::optional<double>> average_win_rate;
};

PairwiseMatrix ComputePairwiseMatrix(std::span<const BattleRecord> battles);

std::string PairwiseMatrixToJson(const PairwiseMatrix& m);
// Heat-map-ready CSV: header "model,<m1>,<m2>,...", one row per model, empty
// cells for undefined values.
std::string WinRateToCsv(const PairwiseMatrix& m);
std::string BattleCountToCsv(const PairwiseMatrix& m);

// Fraction of index-aligned positions with identical three-way labels.
// InvalidArgument when the lists are empty or differ in length.
absl::StatusOr<double> AgreementAccuracy(std::span<const Outcome> human,
                                         std::span<const Outcome> judge);

struct ImageAnnotation {
  ImageRef image_ref;
  bool indoor = false;
  bool has_text = false;
  bool has_landmark = false;

  friend bool operator==(const ImageAnnotation&, const ImageAnnotation&) =
      default;
};

std::string ImageAnnotationToJsonLine(const ImageAnnotation& a);
// Strict: all three boolean fields plus image_ref must be present.
absl::StatusOr<ImageAnnotation> ImageAnnotationFromJsonLine(
    std::string_view line);
absl::StatusOr<std::vector<ImageAnnotation>> ReadAnnotations(
    const std::string& path);

struct CompositionReport {
  int64_t total = 0;
  double indoor_percent = 0.0;
  double outdoor_percent = 0.0;
  double has_text_percent = 0.0;
  double no_text_percent = 0.0;
  double has_landmark_percent = 0.0;
  double no_landmark_percent = 0.0;
};

// Percentages of each binary attribute. An empty input reports zeros.
CompositionReport DatasetComposition(std::span<const ImageAnnotation> annotations);
std::string CompositionToJson(const CompositionReport& report);

}  // namespace arena

#endif  // ARENA_ANALYSIS_H_
