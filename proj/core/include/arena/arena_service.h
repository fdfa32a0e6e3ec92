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

#ifndef ARENA_ARENA_SERVICE_H_
#define ARENA_ARENA_SERVICE_H_

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/clock.h"
#include "absl/time/time.h"
#include "arena/analysis.h"
#include "arena/battle_log.h"
#include "arena/bradley_terry.h"
#include "arena/image_store.h"
#include "arena/leaderboard.h"
#include "arena/model.h"
#include "arena/providers.h"

namespace arena {

enum class VoteChoice { kLeft, kRight, kTie };

absl::StatusOr<VoteChoice> VoteChoiceFromName(std::string_view name);
std::string_view VoteChoiceName(VoteChoice choice);

// Maps a side-relative vote onto the (model_a, model_b) outcome.
Outcome OutcomeForVote(VoteChoice choice, bool left_is_a);

enum class SessionState { kAwaitingVote, kCompleted, kExpired };

struct BattleSession {
  std::string battle_id;
  absl::Time created_at;
  absl::Time expiry;
  ModelId model_a;
  ModelId model_b;
  bool left_is_a = true;
  std::string prompt;
  ImageRef image_ref;
  std::string response_a;
  std::string response_b;
  SessionState state = SessionState::kAwaitingVote;
  std::optional<Outcome> outcome;
  bool vote_in_flight = false;
};

// What the voter sees before voting. Carries no model identity.
struct ClientBattleView {
  std::string battle_id;
  std::string response_left;
  std::string response_right;
};

struct RevealView {
  ModelId model_left;
  ModelId model_right;
  VoteChoice choice;
  Outcome outcome;  // over (model_a, model_b), as logged
};

std::string ClientBattleViewToJson(const ClientBattleView& view);
// {"model_left", "model_right", "outcome": "left"|"right"|"tie"}
std::string RevealViewToJson(const RevealView& view);

inline constexpr std::string_view kInsufficientData = "insufficient data";

struct LeaderboardSnapshot {
  std::string status;  // "ok", kInsufficientData, or an error message
  std::optional<Leaderboard> board;
  absl::Time computed_at;
  int64_t battles = 0;
};

struct ServiceOptions {
  int64_t max_image_bytes = 10 * 1024 * 1024;
  double battles_per_hour = 10.0;  // per client key; 0 disables
  absl::Duration session_ttl = absl::Minutes(30);
  absl::Duration leaderboard_interval = absl::Minutes(5);
  absl::Duration sweep_interval = absl::Minutes(1);
  std::optional<std::string> default_prompt;
  BTConfig bt;
  int bootstrap_rounds = 100;
  uint64_t bootstrap_seed = 0;
  // Seeds pair sampling and side assignment; random when unset.
  std::optional<uint64_t> sampling_seed;
  std::function<absl::Time()> clock = [] { return absl::Now(); };
};

class ArenaService {
 public:
  ArenaService(ServiceOptions options, std::shared_ptr<ProviderRouter> router,
               std::shared_ptr<BattleLog> log,
               std::shared_ptr<const ImageStore> images);
  ~ArenaService();

  ArenaService(const ArenaService&) = delete;
  ArenaService& operator=(const ArenaService&) = delete;

  // Errors: OutOfRange for an oversized image, InvalidArgument for an
  // unrecognised one, ResourceExhausted when `client_key` is over its rate,
  // FailedPrecondition with fewer than two active models, Unavailable
  // (retriable) when either provider fails. Nothing is logged on error.
  absl::StatusOr<ClientBattleView> CreateBattle(
      std::string_view image, std::optional<MediaType> declared_type,
      std::optional<std::string> prompt, std::string_view client_key = "");

  // Errors: NotFound, AlreadyExists (first vote stands), FailedPrecondition
  // for an expired session, Unavailable when the log append fails.
  absl::StatusOr<RevealView> SubmitVote(std::string_view battle_id,
                                        VoteChoice choice);

  // Cached snapshot, recomputed at most once per interval unless forced.
  std::shared_ptr<const LeaderboardSnapshot> GetLeaderboard(bool force = false);

  absl::StatusOr<PairwiseMatrix> PairwiseStats() const;
  std::vector<RegistryEntry> ActiveModels() const;

  // Marks overdue sessions expired and drops settled ones past their expiry.
  // Returns the number newly expired.
  int SweepExpired();

  std::optional<BattleSession> FindSession(std::string_view battle_id) const;

  // Periodic sweep and leaderboard refresh on a background thread.
  void StartBackgroundTasks();
  void Stop();

 private:
  std::string NewBattleId();
  bool TakeRateToken(std::string_view client_key, absl::Time now);
  std::shared_ptr<const LeaderboardSnapshot> Recompute(absl::Time now) const;

  const ServiceOptions options_;
  std::shared_ptr<ProviderRouter> router_;
  std::shared_ptr<BattleLog> log_;
  std::shared_ptr<const ImageStore> images_;

  std::mutex rng_mu_;
  std::mt19937_64 sampling_rng_;  // guarded by rng_mu_
  std::mt19937_64 id_rng_;        // guarded by rng_mu_

  struct Bucket {
    double tokens;
    absl::Time updated;
  };
  std::mutex rate_mu_;
  std::map<std::string, Bucket, std::less<>> buckets_;  // guarded by rate_mu_

  mutable std::mutex sessions_mu_;
  std::map<std::string, BattleSession, std::less<>> sessions_;

  std::mutex refresh_mu_;  // serializes recomputation
  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const LeaderboardSnapshot> snapshot_;  // guarded by snapshot_mu_

  std::mutex background_mu_;
  std::condition_variable background_cv_;
  bool stopping_ = false;  // guarded by background_mu_
  std::thread background_;
};

}  // namespace arena

#endif  // ARENA_ARENA_SERVICE_H_
