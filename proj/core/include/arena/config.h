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

#ifndef ARENA_CONFIG_H_
#define ARENA_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "arena/bradley_terry.h"
#include "arena/elo.h"
#include "arena/providers.h"
#include "arena/registry.h"

namespace arena {

struct ServerSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;  // optional web client to serve at "/"
  std::string admin_token;  // enables GET /api/leaderboard?refresh=1
};

struct StorageSettings {
  std::string log_path = "data/battles.jsonl";
  std::string image_dir = "data/images";
};

struct LimitSettings {
  int64_t max_image_bytes = 10 * 1024 * 1024;
  // Token-bucket rate per client address; 0 disables the limit.
  double battles_per_hour = 10.0;
  absl::Duration session_ttl = absl::Minutes(30);
  absl::Duration leaderboard_interval = absl::Minutes(5);
};

struct RatingSettings {
  BTConfig bt;
  EloConfig elo;
  int bootstrap_rounds = 100;
  uint64_t seed = 0;
};

struct ProviderSettings {
  HttpProviderConfig http;
  // ModelId provider parts served by this endpoint; "*" for all.
  std::vector<std::string> routes;
  int max_concurrency = 4;
};

// Deployment configuration shared by the service and the CLI. Credentials
// never live here; they come from GEOARENA_<PROVIDER>_API_KEY.
struct ArenaConfig {
  ServerSettings server;
  StorageSettings storage;
  ModelRegistry registry = DefaultRegistry();
  std::vector<ProviderSettings> providers;
  std::optional<std::string> default_prompt;
  RatingSettings rating;
  LimitSettings limits;
  RetryPolicy retry;
};

// Parses the JSON configuration. Every section is optional; errors name the
// offending field, e.g. "rating.alpha: must be positive".
absl::StatusOr<ArenaConfig> ParseArenaConfig(std::string_view json);
absl::StatusOr<ArenaConfig> LoadArenaConfig(const std::filesystem::path& path);

// Builds the provider router. In mock mode every model is served by one
// MockProvider (returned through `mock` when non-null); otherwise each
// configured endpoint needs its credential variable to be set.
absl::StatusOr<std::shared_ptr<ProviderRouter>> BuildRouter(
    const ArenaConfig& config, bool mock_mode,
    std::shared_ptr<MockProvider>* mock = nullptr);

}  // namespace arena

#endif  // ARENA_CONFIG_H_
