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

#include "arena/arena_service.h"

#include <algorithm>
#include <future>
#include <utility>

#include "absl/strings/ascii.h"
#include "arena/format.h"
#include "json_codec.h"

namespace arena {
namespace {

using internal::Json;

// Drops sub-second precision so the in-memory record equals its log line.
absl::Time WholeSeconds(absl::Time t) {
  return absl::FromUnixSeconds(absl::ToUnixSeconds(t));
}

std::string_view SideName(VoteChoice choice) { return VoteChoiceName(choice); }

}  // namespace

absl::StatusOr<VoteChoice> VoteChoiceFromName(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  if (lower == "left") return VoteChoice::kLeft;
  if (lower == "right") return VoteChoice::kRight;
  if (lower == "tie") return VoteChoice::kTie;
  return absl::InvalidArgumentError(
      fmt::format("choice must be left, right or tie; got \"{}\"", name));
}

std::string_view VoteChoiceName(VoteChoice choice) {
  switch (choice) {
    case VoteChoice::kLeft:
      return "left";
    case VoteChoice::kRight:
      return "right";
    case VoteChoice::kTie:
      return "tie";
  }
  return "tie";
}

Outcome OutcomeForVote(VoteChoice choice, bool left_is_a) {
  switch (choice) {
    case VoteChoice::kTie:
      return Outcome::kTie;
    case VoteChoice::kLeft:
      return left_is_a ? Outcome::kWinA : Outcome::kWinB;
    case VoteChoice::kRight:
      return left_is_a ? Outcome::kWinB : Outcome::kWinA;
  }
  return Outcome::kTie;
}

std::string ClientBattleViewToJson(const ClientBattleView& view) {
  Json j = {{"battle_id", view.battle_id},
            {"response_left", view.response_left},
            {"response_right", view.response_right}};
  return j.dump();
}

std::string RevealViewToJson(const RevealView& view) {
  Json j = {{"model_left", view.model_left.canonical()},
            {"model_right", view.model_right.canonical()},
            {"outcome", SideName(view.choice)}};
  return j.dump();
}

ArenaService::ArenaService(ServiceOptions options,
                           std::shared_ptr<ProviderRouter> router,
                           std::shared_ptr<BattleLog> log,
                           std::shared_ptr<const ImageStore> images)
    : options_(std::move(options)),
      router_(std::move(router)),
      log_(std::move(log)),
      images_(std::move(images)) {
  std::random_device device;
  const uint64_t seed = options_.sampling_seed.has_value()
                            ? *options_.sampling_seed
                            : (uint64_t{device()} << 32) ^ device();
  sampling_rng_.seed(seed);
  id_rng_.seed((uint64_t{device()} << 32) ^ device());
}

ArenaService::~ArenaService() { Stop(); }

std::string ArenaService::NewBattleId() {
  std::lock_guard lock(rng_mu_);
  return fmt::format("{:016x}{:016x}", id_rng_(), id_rng_());
}

bool ArenaService::TakeRateToken(std::string_view client_key, absl::Time now) {
  const double rate = options_.battles_per_hour;
  if (rate <= 0) return true;
  const double capacity = std::max(1.0, rate);
  std::lock_guard lock(rate_mu_);
  auto it = buckets_.find(client_key);
  if (it == buckets_.end()) {
    it = buckets_.emplace(std::string(client_key), Bucket{capacity, now}).first;
  }
  Bucket& bucket = it->second;
  const double hours = absl::ToDoubleHours(now - bucket.updated);
  bucket.tokens = std::min(capacity, bucket.tokens + std::max(0.0, hours) * rate);
  bucket.updated = now;
  if (bucket.tokens < 1.0) return false;
  bucket.tokens -= 1.0;
  return true;
}

absl::StatusOr<ClientBattleView> ArenaService::CreateBattle(
    std::string_view image, std::optional<MediaType> declared_type,
    std::optional<std::string> prompt, std::string_view client_key) {
  if (static_cast<int64_t>(image.size()) > options_.max_image_bytes) {
    return absl::OutOfRangeError(fmt::format(
        "image is {} bytes; the limit is {}", image.size(),
        options_.max_image_bytes));
  }
  auto sniffed = SniffMediaType(image);
  if (!sniffed.ok()) return sniffed.status();
  if (declared_type.has_value() && *declared_type != *sniffed) {
    return absl::InvalidArgumentError(fmt::format(
        "declared media type {} does not match the image contents ({})",
        MediaTypeMime(*declared_type), MediaTypeMime(*sniffed)));
  }
  const absl::Time now = options_.clock();
  if (!TakeRateToken(client_key, now)) {
    return absl::ResourceExhaustedError("battle rate limit exceeded; retry later");
  }

  const std::vector<ModelId> active = router_->registry().ActiveModels();
  if (active.size() < 2) {
    return absl::FailedPreconditionError(
        "at least two active models are required");
  }
  ModelId model_a = active[0];
  ModelId model_b = active[1];
  bool left_is_a = true;
  {
    std::lock_guard lock(rng_mu_);
    std::uniform_int_distribution<std::size_t> first(0, active.size() - 1);
    std::uniform_int_distribution<std::size_t> second(0, active.size() - 2);
    const std::size_t i = first(sampling_rng_);
    std::size_t j = second(sampling_rng_);
    if (j >= i) ++j;
    model_a = active[i];
    model_b = active[j];
    left_is_a = std::bernoulli_distribution(0.5)(sampling_rng_);
  }

  auto ref = images_->Put(image, *sniffed);
  if (!ref.ok()) return ref.status();
  // Models see the stored (metadata-stripped) bytes.
  auto stored = images_->Get(*ref);
  if (!stored.ok()) return stored.status();

  const std::string text =
      prompt.has_value() && !prompt->empty()
          ? *prompt
          : DefaultPrompt(options_.default_prompt
                              ? std::optional<std::string_view>(
                                    *options_.default_prompt)
                              : std::nullopt);
  auto request_for = [&](const ModelId& model) {
    return GenerationRequest{
        .model = model, .prompt = text, .image = *stored, .media_type = *sniffed};
  };
  auto future_b = std::async(std::launch::async,
                             [this, request = request_for(model_b)] {
                               return router_->Generate(request);
                             });
  absl::StatusOr<GenerationResult> result_a = router_->Generate(request_for(model_a));
  absl::StatusOr<GenerationResult> result_b = future_b.get();
  for (const auto* result : {&result_a, &result_b}) {
    if (!result->ok()) {
      return absl::UnavailableError(fmt::format(
          "battle aborted: {}; please retry", result->status().message()));
    }
    if ((*result)->status != ProviderStatus::kOk) {
      return absl::UnavailableError(fmt::format(
          "battle aborted: a model failed to respond ({}); please retry",
          ProviderStatusName((*result)->status)));
    }
  }

  BattleSession session{.battle_id = NewBattleId(),
                        .created_at = now,
                        .expiry = now + options_.session_ttl,
                        .model_a = model_a,
                        .model_b = model_b,
                        .left_is_a = left_is_a,
                        .prompt = text,
                        .image_ref = *ref,
                        .response_a = std::move(result_a->response_text),
                        .response_b = std::move(result_b->response_text)};

  ClientBattleView view;
  view.battle_id = session.battle_id;
  view.response_left = left_is_a ? session.response_a : session.response_b;
  view.response_right = left_is_a ? session.response_b : session.response_a;
  {
    std::lock_guard lock(sessions_mu_);
    sessions_.emplace(session.battle_id, std::move(session));
  }
  return view;
}

absl::StatusOr<RevealView> ArenaService::SubmitVote(std::string_view battle_id,
                                                    VoteChoice choice) {
  std::optional<BattleRecord> pending;
  bool left_is_a = true;
  {
    std::lock_guard lock(sessions_mu_);
    auto it = sessions_.find(battle_id);
    if (it == sessions_.end()) {
      return absl::NotFoundError(fmt::format("unknown battle {}", battle_id));
    }
    BattleSession& session = it->second;
    if (session.state == SessionState::kCompleted || session.vote_in_flight) {
      return absl::AlreadyExistsError("this battle has already been voted on");
    }
    const absl::Time now = options_.clock();
    if (session.state == SessionState::kExpired || now >= session.expiry) {
      session.state = SessionState::kExpired;
      return absl::FailedPreconditionError("this battle has expired");
    }
    session.vote_in_flight = true;
    left_is_a = session.left_is_a;
    pending = BattleRecord{.battle_id = session.battle_id,
                           .timestamp = WholeSeconds(now),
                           .model_a = session.model_a,
                           .model_b = session.model_b,
                           .prompt = session.prompt,
                           .image_ref = session.image_ref,
                           .response_a = session.response_a,
                           .response_b = session.response_b,
                           .outcome = OutcomeForVote(choice, left_is_a)};
  }
  const BattleRecord& record = *pending;

  const absl::Status appended = log_->Append(record);

  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(battle_id);
  BattleSession* session = it == sessions_.end() ? nullptr : &it->second;
  if (!appended.ok()) {
    if (session != nullptr) session->vote_in_flight = false;
    return absl::UnavailableError(
        fmt::format("vote could not be recorded: {}", appended.message()));
  }
  if (session != nullptr) {
    session->vote_in_flight = false;
    session->state = SessionState::kCompleted;
    session->outcome = record.outcome;
  }
  return RevealView{left_is_a ? record.model_a : record.model_b,
                    left_is_a ? record.model_b : record.model_a, choice,
                    record.outcome};
}

std::shared_ptr<const LeaderboardSnapshot> ArenaService::Recompute(
    absl::Time now) const {
  auto snapshot = std::make_shared<LeaderboardSnapshot>();
  snapshot->computed_at = now;
  auto read = log_->Read();
  if (!read.ok()) {
    snapshot->status = fmt::format("error: {}", read.status().message());
    return snapshot;
  }
  snapshot->battles = static_cast<int64_t>(read->records.size());
  if (read->records.empty()) {
    snapshot->status = std::string(kInsufficientData);
    return snapshot;
  }
  LeaderboardOptions options;
  options.rounds = options_.bootstrap_rounds;
  options.seed = options_.bootstrap_seed;
  options.known_models = router_->registry().ActiveModels();
  auto board = ComputeLeaderboard(read->records, options_.bt, options);
  if (!board.ok()) {
    snapshot->status = board.status().code() == absl::StatusCode::kFailedPrecondition
                           ? std::string(kInsufficientData)
                           : fmt::format("error: {}", board.status().message());
    return snapshot;
  }
  snapshot->status = "ok";
  snapshot->board = *std::move(board);
  return snapshot;
}

std::shared_ptr<const LeaderboardSnapshot> ArenaService::GetLeaderboard(
    bool force) {
  auto fresh = [&](absl::Time now) {
    std::lock_guard lock(snapshot_mu_);
    if (snapshot_ != nullptr && !force &&
        now - snapshot_->computed_at < options_.leaderboard_interval) {
      return snapshot_;
    }
    return std::shared_ptr<const LeaderboardSnapshot>();
  };
  if (auto cached = fresh(options_.clock())) return cached;
  std::lock_guard refresh(refresh_mu_);
  // Another caller may have refreshed while this one waited.
  const absl::Time now = options_.clock();
  if (auto cached = fresh(now)) return cached;
  auto snapshot = Recompute(now);
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = snapshot;
  return snapshot;
}

absl::StatusOr<PairwiseMatrix> ArenaService::PairwiseStats() const {
  auto read = log_->Read();
  if (!read.ok()) return read.status();
  return ComputePairwiseMatrix(read->records);
}

std::vector<RegistryEntry> ArenaService::ActiveModels() const {
  std::vector<RegistryEntry> out;
  for (const RegistryEntry& e : router_->registry().entries()) {
    if (e.active) out.push_back(e);
  }
  return out;
}

int ArenaService::SweepExpired() {
  const absl::Time now = options_.clock();
  int expired = 0;
  std::lock_guard lock(sessions_mu_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    BattleSession& s = it->second;
    if (s.state == SessionState::kAwaitingVote && !s.vote_in_flight &&
        now >= s.expiry) {
      s.state = SessionState::kExpired;
      ++expired;
    }
    // Settled sessions linger one extra TTL so late duplicates still get a
    // conflict or gone answer rather than not-found.
    if (s.state != SessionState::kAwaitingVote &&
        now >= s.expiry + options_.session_ttl) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
  return expired;
}

std::optional<BattleSession> ArenaService::FindSession(
    std::string_view battle_id) const {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(battle_id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

void ArenaService::StartBackgroundTasks() {
  std::lock_guard lock(background_mu_);
  if (background_.joinable()) return;
  stopping_ = false;
  background_ = std::thread([this] {
    const absl::Duration tick =
        std::min(options_.sweep_interval, options_.leaderboard_interval);
    std::unique_lock lock(background_mu_);
    while (!stopping_) {
      lock.unlock();
      SweepExpired();
      GetLeaderboard();
      lock.lock();
      background_cv_.wait_for(lock, absl::ToChronoMilliseconds(tick),
                              [this] { return stopping_; });
    }
  });
}

void ArenaService::Stop() {
  {
    std::lock_guard lock(background_mu_);
    stopping_ = true;
  }
  background_cv_.notify_all();
  if (background_.joinable()) background_.join();
}

}  // namespace arena
