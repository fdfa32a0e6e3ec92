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

#ifndef ARENA_MODEL_H_
#define ARENA_MODEL_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/time.h"

namespace arena {

// Identity of a competing model, e.g. "openai/gpt-4o". Always stored in its
// canonical lowercase "provider/name" form; equality is byte equality of that
// form.
class ModelId {
 public:
  // Accepts "provider/name" in any case. Rejects inputs without exactly one
  // '/' or with an empty side.
  static absl::StatusOr<ModelId> Parse(std::string_view text);
  static absl::StatusOr<ModelId> Create(std::string_view provider,
                                        std::string_view name);

  std::string_view provider() const {
    return std::string_view(canonical_).substr(0, slash_);
  }
  std::string_view name() const {
    return std::string_view(canonical_).substr(slash_ + 1);
  }
  const std::string& canonical() const { return canonical_; }

  friend bool operator==(const ModelId& a, const ModelId& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const ModelId& a, const ModelId& b) {
    return a.canonical_ <=> b.canonical_;
  }
  friend std::ostream& operator<<(std::ostream& os, const ModelId& id) {
    return os << id.canonical_;
  }

 private:
  ModelId(std::string canonical, std::size_t slash)
      : canonical_(std::move(canonical)), slash_(slash) {}

  std::string canonical_;
  std::size_t slash_ = 0;
};

// Test and fixture helper; aborts on malformed input.
ModelId MustParseModelId(std::string_view text);

// Vote result of a battle, expressed from model A's point of view.
enum class Outcome { kWinA, kWinB, kTie };

// 1.0 for a win by A, 0.5 for a tie, 0.0 for a win by B.
double ScoreForA(Outcome outcome);

// Wire form used by the battle log: "model_a" | "model_b" | "tie".
std::string_view OutcomeToWinner(Outcome outcome);
absl::StatusOr<Outcome> OutcomeFromWinner(std::string_view winner);

// The outcome seen from B's side.
Outcome Swapped(Outcome outcome);

// Content-addressed reference to a stored image.
struct ImageRef {
  std::string sha256;    // lowercase hex digest of the stored bytes
  std::string filename;  // path relative to the image store root

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

// One completed, voted comparison.
struct BattleRecord {
  std::string battle_id;
  absl::Time timestamp;  // truncated to whole seconds when serialized
  ModelId model_a = MustParseModelId("unset/a");
  ModelId model_b = MustParseModelId("unset/b");
  std::string prompt;
  ImageRef image_ref;
  std::string response_a;
  std::string response_b;
  Outcome outcome = Outcome::kTie;

  friend bool operator==(const BattleRecord&, const BattleRecord&) = default;
};

// Checks the structural invariants of a record: non-empty id, distinct
// models, non-empty responses, and a well-formed image digest.
absl::Status ValidateBattleRecord(const BattleRecord& record);

// RFC 3339 UTC with seconds precision, e.g. "2025-09-01T12:00:00Z".
std::string FormatTimestamp(absl::Time t);
absl::StatusOr<absl::Time> ParseTimestamp(std::string_view text);

}  // namespace arena

template <>
struct std::hash<arena::ModelId> {
  std::size_t operator()(const arena::ModelId& id) const noexcept {
    return std::hash<std::string>{}(id.canonical());
  }
};

#endif  // ARENA_MODEL_H_
