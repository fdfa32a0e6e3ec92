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

#include "json_codec.h"

#include <string>

#include "arena/format.h"

namespace arena::internal {

absl::StatusOr<Json> ParseJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError("malformed JSON");
  }
  return j;
}

absl::StatusOr<std::string> GetString(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(fmt::format("missing field '{}'", key));
  }
  if (!it->is_string()) {
    return absl::InvalidArgumentError(
        fmt::format("field '{}' must be a string", key));
  }
  return it->get<std::string>();
}

absl::StatusOr<double> GetNumber(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(fmt::format("missing field '{}'", key));
  }
  if (!it->is_number()) {
    return absl::InvalidArgumentError(
        fmt::format("field '{}' must be a number", key));
  }
  return it->get<double>();
}

absl::StatusOr<bool> GetBool(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(fmt::format("missing field '{}'", key));
  }
  if (!it->is_boolean()) {
    return absl::InvalidArgumentError(
        fmt::format("field '{}' must be a boolean", key));
  }
  return it->get<bool>();
}

absl::StatusOr<ModelId> GetModelId(const Json& obj, std::string_view key) {
  auto text = GetString(obj, key);
  if (!text.ok()) return text.status();
  auto id = ModelId::Parse(*text);
  if (!id.ok()) {
    return absl::InvalidArgumentError(
        fmt::format("field '{}': {}", key, id.status().message()));
  }
  return id;
}

Json BattleRecordToJson(const BattleRecord& record) {
  // Keys serialize in sorted order.
  Json j;
  j["battle_id"] = record.battle_id;
  j["timestamp"] = FormatTimestamp(record.timestamp);
  j["model_a"] = record.model_a.canonical();
  j["model_b"] = record.model_b.canonical();
  j["winner"] = std::string(OutcomeToWinner(record.outcome));
  j["prompt"] = record.prompt;
  j["image_ref"] = {{"sha256", record.image_ref.sha256},
                    {"filename", record.image_ref.filename}};
  j["response_a"] = record.response_a;
  j["response_b"] = record.response_b;
  return j;
}

absl::StatusOr<BattleRecord> BattleRecordFromJson(const Json& obj) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError("battle record must be a JSON object");
  }
  BattleRecord r;
  auto id = GetString(obj, "battle_id");
  if (!id.ok()) return id.status();
  r.battle_id = *std::move(id);

  auto ts = GetString(obj, "timestamp");
  if (!ts.ok()) return ts.status();
  auto time = ParseTimestamp(*ts);
  if (!time.ok()) return time.status();
  r.timestamp = *time;

  auto a = GetModelId(obj, "model_a");
  if (!a.ok()) return a.status();
  r.model_a = *std::move(a);
  auto b = GetModelId(obj, "model_b");
  if (!b.ok()) return b.status();
  r.model_b = *std::move(b);

  auto winner = GetString(obj, "winner");
  if (!winner.ok()) return winner.status();
  auto outcome = OutcomeFromWinner(*winner);
  if (!outcome.ok()) return outcome.status();
  r.outcome = *outcome;

  auto prompt = GetString(obj, "prompt");
  if (!prompt.ok()) return prompt.status();
  r.prompt = *std::move(prompt);

  auto it = obj.find("image_ref");
  if (it == obj.end() || !it->is_object()) {
    return absl::InvalidArgumentError("field 'image_ref' must be an object");
  }
  auto sha = GetString(*it, "sha256");
  if (!sha.ok()) return sha.status();
  auto file = GetString(*it, "filename");
  if (!file.ok()) return file.status();
  r.image_ref = ImageRef{*std::move(sha), *std::move(file)};

  auto ra = GetString(obj, "response_a");
  if (!ra.ok()) return ra.status();
  r.response_a = *std::move(ra);
  auto rb = GetString(obj, "response_b");
  if (!rb.ok()) return rb.status();
  r.response_b = *std::move(rb);

  if (absl::Status s = ValidateBattleRecord(r); !s.ok()) return s;
  return r;
}

}  // namespace arena::internal
