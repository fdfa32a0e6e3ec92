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

#include "arena/battle_log.h"

#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <utility>

#include "arena/format.h"
#include "json_codec.h"

namespace arena {

std::string BattleRecordToJsonLine(const BattleRecord& record) {
  return internal::BattleRecordToJson(record).dump();
}

absl::StatusOr<BattleRecord> BattleRecordFromJsonLine(std::string_view line) {
  auto j = internal::ParseJson(line);
  if (!j.ok()) return j.status();
  return internal::BattleRecordFromJson(*j);
}

bool BattleFilter::Matches(const BattleRecord& record) const {
  if (since && record.timestamp < *since) return false;
  if (until && record.timestamp > *until) return false;
  if (!models.empty()) {
    const bool hit = std::any_of(models.begin(), models.end(),
                                 [&](const ModelId& m) {
                                   return m == record.model_a ||
                                          m == record.model_b;
                                 });
    if (!hit) return false;
  }
  return true;
}

absl::StatusOr<BattleReadResult> ReadBattles(const std::filesystem::path& path,
                                             const BattleFilter& filter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        fmt::format("cannot open battle log {}", path.string()));
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());

  BattleReadResult result;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) break;  // partial trailing append
    std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto record = BattleRecordFromJsonLine(line);
    if (!record.ok()) {
      ++result.skipped_lines;
      result.warnings.push_back(fmt::format("{}:{}: {}", path.string(), line_no, record.status().message()));
      continue;
    }
    if (filter.Matches(*record)) result.records.push_back(*std::move(record));
  }
  return result;
}

absl::StatusOr<std::unique_ptr<BattleLog>> BattleLog::Open(
    const std::filesystem::path& path) {
  std::unordered_set<std::string> ids;
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    auto existing = ReadBattles(path);
    if (!existing.ok()) return existing.status();
    for (const BattleRecord& r : existing->records) ids.insert(r.battle_id);
  } else if (path.has_parent_path() &&
             !std::filesystem::exists(path.parent_path(), ec)) {
    return absl::NotFoundError(fmt::format("log directory {} does not exist", path.parent_path().string()));
  }
  std::FILE* file = std::fopen(path.c_str(), "ab");
  if (file == nullptr) {
    return absl::UnavailableError(fmt::format("cannot open {} for append: {}", path.string(), std::strerror(errno)));
  }
  return std::unique_ptr<BattleLog>(
      new BattleLog(path, file, std::move(ids)));
}

BattleLog::BattleLog(std::filesystem::path path, std::FILE* file,
                     std::unordered_set<std::string> ids)
    : path_(std::move(path)), file_(file), ids_(std::move(ids)) {}

BattleLog::~BattleLog() {
  if (file_ != nullptr) std::fclose(file_);
}

absl::Status BattleLog::Append(const BattleRecord& record) {
  if (absl::Status s = ValidateBattleRecord(record); !s.ok()) return s;
  std::string line = BattleRecordToJsonLine(record);
  line.push_back('\n');

  std::lock_guard<std::mutex> lock(mu_);
  if (ids_.contains(record.battle_id)) {
    return absl::AlreadyExistsError(
        fmt::format("battle {} already logged", record.battle_id));
  }
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
      std::fflush(file_) != 0 || ::fsync(fileno(file_)) != 0) {
    return absl::UnavailableError(
        fmt::format("write to {} failed: {}", path_.string(), std::strerror(errno)));
  }
  ids_.insert(record.battle_id);
  return absl::OkStatus();
}

absl::StatusOr<BattleReadResult> BattleLog::Read(
    const BattleFilter& filter) const {
  return ReadBattles(path_, filter);
}

std::size_t BattleLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return ids_.size();
}

}  // namespace arena
