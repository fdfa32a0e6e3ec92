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

#include "arena/model.h"

#include <cstdlib>
#include <iostream>

#include "absl/strings/ascii.h"
#include "arena/format.h"

namespace arena {

absl::StatusOr<ModelId> ModelId::Parse(std::string_view text) {
  std::string canonical = absl::AsciiStrToLower(std::string(text));
  const std::size_t slash = canonical.find('/');
  if (slash == std::string::npos) {
    return absl::InvalidArgumentError(
        fmt::format("model id '{}' has no '/' separator", text));
  }
  if (canonical.find('/', slash + 1) != std::string::npos) {
    return absl::InvalidArgumentError(
        fmt::format("model id '{}' has more than one '/'", text));
  }
  if (slash == 0 || slash + 1 == canonical.size()) {
    return absl::InvalidArgumentError(
        fmt::format("model id '{}' has an empty provider or name", text));
  }
  for (char c : canonical) {
    if (absl::ascii_isspace(static_cast<unsigned char>(c))) {
      return absl::InvalidArgumentError(
          fmt::format("model id '{}' contains whitespace", text));
    }
  }
  return ModelId(std::move(canonical), slash);
}

absl::StatusOr<ModelId> ModelId::Create(std::string_view provider,
                                        std::string_view name) {
  return Parse(fmt::format("{}/{}", provider, name));
}

ModelId MustParseModelId(std::string_view text) {
  auto id = ModelId::Parse(text);
  if (!id.ok()) {
    std::cerr << id.status() << "\n";
    std::abort();
  }
  return *std::move(id);
}

double ScoreForA(Outcome outcome) {
  switch (outcome) {
    case Outcome::kWinA:
      return 1.0;
    case Outcome::kWinB:
      return 0.0;
    case Outcome::kTie:
      return 0.5;
  }
  return 0.5;
}

std::string_view OutcomeToWinner(Outcome outcome) {
  switch (outcome) {
    case Outcome::kWinA:
      return "model_a";
    case Outcome::kWinB:
      return "model_b";
    case Outcome::kTie:
      return "tie";
  }
  return "tie";
}

absl::StatusOr<Outcome> OutcomeFromWinner(std::string_view winner) {
  if (winner == "model_a") return Outcome::kWinA;
  if (winner == "model_b") return Outcome::kWinB;
  if (winner == "tie") return Outcome::kTie;
  return absl::InvalidArgumentError(
      fmt::format("unknown winner value '{}'", winner));
}

Outcome Swapped(Outcome outcome) {
  switch (outcome) {
    case Outcome::kWinA:
      return Outcome::kWinB;
    case Outcome::kWinB:
      return Outcome::kWinA;
    case Outcome::kTie:
      return Outcome::kTie;
  }
  return outcome;
}

namespace {

bool IsLowerHexDigest(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

absl::Status ValidateBattleRecord(const BattleRecord& record) {
  if (record.battle_id.empty()) {
    return absl::InvalidArgumentError("battle_id is empty");
  }
  if (record.model_a == record.model_b) {
    return absl::InvalidArgumentError(
        fmt::format("battle {}: model_a and model_b are both {}", record.battle_id, record.model_a.canonical()));
  }
  if (record.response_a.empty() || record.response_b.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("battle {}: empty response", record.battle_id));
  }
  if (!IsLowerHexDigest(record.image_ref.sha256)) {
    return absl::InvalidArgumentError(
        fmt::format("battle {}: image_ref.sha256 is not a sha-256 hex digest", record.battle_id));
  }
  if (record.image_ref.filename.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("battle {}: image_ref.filename empty", record.battle_id));
  }
  return absl::OkStatus();
}

std::string FormatTimestamp(absl::Time t) {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%SZ", absl::FromUnixSeconds(absl::ToUnixSeconds(t)),
                          absl::UTCTimeZone());
}

absl::StatusOr<absl::Time> ParseTimestamp(std::string_view text) {
  absl::Time t;
  std::string err;
  if (!absl::ParseTime(absl::RFC3339_full, std::string(text), &t, &err)) {
    return absl::InvalidArgumentError(
        fmt::format("bad RFC 3339 timestamp '{}': {}", text, err));
  }
  return absl::FromUnixSeconds(absl::ToUnixSeconds(t));
}

}  // namespace arena
