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

#ifndef ARENA_BATTLE_LOG_H_
#define ARENA_BATTLE_LOG_H_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "arena/model.h"

namespace arena {

// Single-line JSON form of a record (no trailing newline). Field names:
// battle_id, timestamp, model_a, model_b, winner, prompt, image_ref,
// response_a, response_b.
std::string BattleRecordToJsonLine(const BattleRecord& record);
absl::StatusOr<BattleRecord> BattleRecordFromJsonLine(std::string_view line);

// Conjunctive filter applied when reading a log. Time bounds are inclusive.
// A model set matches a record when either side is in the set.
struct BattleFilter {
  std::optional<absl::Time> since;
  std::optional<absl::Time> until;
  std::vector<ModelId> models;

  bool Matches(const BattleRecord& record) const;
};

struct BattleReadResult {
  std::vector<BattleRecord> records;  // in append order
  // Lines that failed to parse or violated record invariants.
  std::size_t skipped_lines = 0;
  std::vector<std::string> warnings;
};

// Reads a JSONL battle log. A missing file is an error; an empty file yields
// no records. A trailing line without a newline is an append in progress and
// is ignored without counting as corrupt.
absl::StatusOr<BattleReadResult> ReadBattles(
    const std::filesystem::path& path, const BattleFilter& filter = {});

// Append-only JSONL battle log with a single writer. Append() may be called
// from any thread; calls are serialized internally and each record is flushed
// and fsync'ed before returning.
class BattleLog {
 public:
  // Opens (creating if needed) the log at `path`. Existing battle ids are
  // indexed so duplicates can be rejected.
  static absl::StatusOr<std::unique_ptr<BattleLog>> Open(
      const std::filesystem::path& path);

  ~BattleLog();
  BattleLog(const BattleLog&) = delete;
  BattleLog& operator=(const BattleLog&) = delete;

  // InvalidArgument for invariant violations, AlreadyExists for a duplicate
  // battle_id, Unavailable for I/O failures (retriable).
  absl::Status Append(const BattleRecord& record);

  absl::StatusOr<BattleReadResult> Read(const BattleFilter& filter = {}) const;

  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  BattleLog(std::filesystem::path path, std::FILE* file,
            std::unordered_set<std::string> ids);

  const std::filesystem::path path_;
  mutable std::mutex mu_;
  std::FILE* file_;  // guarded by mu_
  std::unordered_set<std::string> ids_;  // guarded by mu_
};

}  // namespace arena

#endif  // ARENA_BATTLE_LOG_H_
