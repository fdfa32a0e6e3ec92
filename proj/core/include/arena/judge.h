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

#ifndef ARENA_JUDGE_H_
#define ARENA_JUDGE_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "arena/analysis.h"
#include "arena/image_store.h"
#include "arena/model.h"
#include "arena/providers.h"

namespace arena {

// kWin means response A is better.
enum class JudgeLabel { kWin, kLoss, kTie, kInvalid };

// "win", "loss", "tie" or "INVALID".
std::string_view JudgeLabelName(JudgeLabel label);
absl::StatusOr<JudgeLabel> JudgeLabelFromName(std::string_view name);

// Accepts a bare label, case-insensitively, after trimming whitespace,
// punctuation and markdown asterisks, either as the whole output or as its
// first non-empty line. Anything else is kInvalid.
JudgeLabel ParseVerdict(std::string_view raw_text);

// Human outcome over (A, B) expressed as a judge label.
JudgeLabel LabelForOutcome(Outcome outcome);
std::optional<Outcome> OutcomeForLabel(JudgeLabel label);

inline constexpr std::string_view kImageSlot = "<attached image>";

// Evaluation prompt with A = response_a and B = response_b. The image itself
// travels as an attachment; `kImageSlot` marks its place in the text.
std::string RenderJudgePrompt(std::string_view prompt,
                              std::string_view response_a,
                              std::string_view response_b);

struct JudgeVerdict {
  std::string battle_id;
  ModelId judge_model;
  JudgeLabel label = JudgeLabel::kInvalid;
  std::string raw_text;
};

// {battle_id, judge_model, label, raw_text}
std::string JudgeVerdictToJsonLine(const JudgeVerdict& verdict);

// Loads the bytes a battle's image_ref points to.
using ImageLoader = std::function<absl::StatusOr<std::pair<std::string, MediaType>>(
    const ImageRef&)>;

// Reads from `store`; refs not found there fall back to the placeholder PNG
// when `allow_placeholder` is set (synthetic logs carry no real images).
ImageLoader StoreImageLoader(std::shared_ptr<const ImageStore> store,
                             bool allow_placeholder);
ImageLoader PlaceholderImageLoader();

class Judge {
 public:
  Judge(std::shared_ptr<ProviderRouter> router, ModelId judge_model,
        ImageLoader loader);

  // Unavailable (retriable) on provider failure; an unparseable output is a
  // successful kInvalid verdict.
  absl::StatusOr<JudgeVerdict> JudgePair(const BattleRecord& record) const;

  const ModelId& model() const { return judge_model_; }

 private:
  std::shared_ptr<ProviderRouter> router_;
  ModelId judge_model_;
  ImageLoader loader_;
};

// First `k` positions of a seeded Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k,
                                                  uint64_t seed);

struct AlignmentOptions {
  int sample_size = 100;
  uint64_t seed = 0;
  int concurrency = 4;
};

struct AlignmentReport {
  ModelId judge_model;
  std::vector<std::size_t> sample_indices;
  std::vector<JudgeVerdict> verdicts;  // in sample order
  int64_t valid = 0;
  int64_t invalid = 0;
  // Over valid verdicts only; unset when none are valid.
  std::optional<double> accuracy;
  // Rows: human win/loss/tie. Columns: judge win/loss/tie/INVALID.
  std::array<std::array<int64_t, 4>, 3> confusion{};
};

// InvalidArgument when fewer than sample_size battles are supplied.
absl::StatusOr<AlignmentReport> RunAlignmentStudy(
    const Judge& judge, std::span<const BattleRecord> battles,
    const AlignmentOptions& options);

std::string AlignmentReportToText(const AlignmentReport& report);
std::string AlignmentReportToJson(const AlignmentReport& report);

std::string AnnotationPrompt();

// Strict: a single JSON object holding exactly the boolean fields indoor,
// has_text and has_landmark. A surrounding ``` fence is tolerated.
absl::StatusOr<ImageAnnotation> ParseAnnotation(std::string_view raw_text,
                                                const ImageRef& ref);

// One query to the annotator; a malformed answer is retried once before the
// annotation is rejected with InvalidArgument.
absl::StatusOr<ImageAnnotation> AnnotateImage(ProviderRouter& router,
                                              const ModelId& annotator,
                                              const ImageRef& ref,
                                              const ImageLoader& loader);

}  // namespace arena

#endif  // ARENA_JUDGE_H_
