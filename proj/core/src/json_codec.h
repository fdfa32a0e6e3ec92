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

#ifndef ARENA_SRC_JSON_CODEC_H_
#define ARENA_SRC_JSON_CODEC_H_

#include <string_view>

#include "absl/status/statusor.h"
#include "arena/model.h"
#include "json.hpp"

namespace arena::internal {

using Json = nlohmann::json;

absl::StatusOr<Json> ParseJson(std::string_view text);

// Typed field accessors producing InvalidArgument errors that name the field.
absl::StatusOr<std::string> GetString(const Json& obj, std::string_view key);
absl::StatusOr<double> GetNumber(const Json& obj, std::string_view key);
absl::StatusOr<bool> GetBool(const Json& obj, std::string_view key);
absl::StatusOr<ModelId> GetModelId(const Json& obj, std::string_view key);

Json BattleRecordToJson(const BattleRecord& record);
absl::StatusOr<BattleRecord> BattleRecordFromJson(const Json& obj);

}  // namespace arena::internal

#endif  // ARENA_SRC_JSON_CODEC_H_
