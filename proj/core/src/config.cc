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

#include "arena/config.h"

#include <cstdlib>
#include <fstream>

#include "arena/format.h"
#include "json_codec.h"

namespace arena {
namespace {

using internal::Json;

// Reads optional typed fields, recording the first error with its path.
class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {}

  template <typename T>
  void Get(std::string_view key, T& out) {
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return;
    try {
      out = it->get<T>();
    } catch (const Json::exception&) {
      Fail(key, "has the wrong type");
    }
  }

  void GetSeconds(std::string_view key, absl::Duration& out) {
    double seconds = absl::ToDoubleSeconds(out);
    Get(key, seconds);
    if (!(seconds > 0)) Fail(key, "must be positive");
    out = absl::Seconds(seconds);
  }

  void Positive(std::string_view key, double value) {
    if (!(value > 0)) Fail(key, "must be positive");
  }
  void NonNegative(std::string_view key, double value) {
    if (!(value >= 0)) Fail(key, "must be non-negative");
  }

  void Fail(std::string_view key, std::string_view message) {
    if (error_.ok()) {
      error_ = absl::InvalidArgumentError(
          fmt::format("{}{}: {}", path_.empty() ? "" : path_ + ".", key, message));
    }
  }

  const absl::Status& error() const { return error_; }

 private:
  const Json& obj_;
  std::string path_;
  absl::Status error_;
};

const Json* Section(const Json& root, std::string_view key, absl::Status& err) {
  auto it = root.find(key);
  if (it == root.end() || it->is_null()) return nullptr;
  if (!it->is_object() && !it->is_array()) {
    if (err.ok()) {
      err = absl::InvalidArgumentError(
          fmt::format("{}: must be an object or array", key));
    }
    return nullptr;
  }
  return &*it;
}

}  // namespace

absl::StatusOr<ArenaConfig> ParseArenaConfig(std::string_view json) {
  auto parsed = internal::ParseJson(json);
  if (!parsed.ok()) {
    return absl::InvalidArgumentError("configuration is not valid JSON");
  }
  if (!parsed->is_object()) {
    return absl::InvalidArgumentError("configuration must be a JSON object");
  }
  const Json& root = *parsed;
  ArenaConfig config;
  absl::Status err;

  if (const Json* s = Section(root, "server", err)) {
    Reader r(*s, "server");
    r.Get("host", config.server.host);
    r.Get("port", config.server.port);
    r.Get("static_dir", config.server.static_dir);
    r.Get("admin_token", config.server.admin_token);
    if (config.server.port < 0 || config.server.port > 65535) {
      r.Fail("port", "must be in [0, 65535]");
    }
    if (!r.error().ok()) return r.error();
  }

  if (const Json* s = Section(root, "storage", err)) {
    Reader r(*s, "storage");
    r.Get("log_path", config.storage.log_path);
    r.Get("image_dir", config.storage.image_dir);
    if (!r.error().ok()) return r.error();
  }

  if (const Json* s = Section(root, "registry", err)) {
    if (!s->is_array()) return absl::InvalidArgumentError("registry: must be an array");
    ModelRegistry registry;
    for (std::size_t i = 0; i < s->size(); ++i) {
      const std::string where = fmt::format("registry[{}]", i);
      const Json& e = (*s)[i];
      if (!e.is_object()) {
        return absl::InvalidArgumentError(fmt::format("{}: must be an object", where));
      }
      auto id = internal::GetModelId(e, "id");
      if (!id.ok()) {
        return absl::InvalidArgumentError(
            fmt::format("{}.{}", where, id.status().message()));
      }
      RegistryEntry entry{*id, id->canonical(), false, true};
      Reader r(e, where);
      r.Get("display_name", entry.display_name);
      r.Get("open_source", entry.open_source);
      r.Get("active", entry.active);
      if (!r.error().ok()) return r.error();
      if (absl::Status s2 = registry.Add(entry); !s2.ok()) {
        return absl::InvalidArgumentError(
            fmt::format("{}.id: duplicate model {}", where, id->canonical()));
      }
    }
    config.registry = std::move(registry);
  }

  if (const Json* s = Section(root, "providers", err)) {
    if (!s->is_array()) return absl::InvalidArgumentError("providers: must be an array");
    for (std::size_t i = 0; i < s->size(); ++i) {
      const std::string where = fmt::format("providers[{}]", i);
      const Json& e = (*s)[i];
      ProviderSettings p;
      Reader r(e, where);
      std::string family = "openai";
      r.Get("name", p.http.name);
      r.Get("family", family);
      r.Get("base_url", p.http.base_url);
      r.Get("routes", p.routes);
      r.Get("model_map", p.http.model_map);
      r.Get("send_canonical_id", p.http.send_canonical_id);
      r.Get("max_tokens", p.http.default_max_tokens);
      r.Get("max_concurrency", p.max_concurrency);
      if (p.http.name.empty()) r.Fail("name", "is required");
      if (p.http.base_url.empty()) r.Fail("base_url", "is required");
      if (p.max_concurrency <= 0) r.Fail("max_concurrency", "must be positive");
      auto fam = ApiFamilyFromName(family);
      if (!fam.ok()) r.Fail("family", fam.status().message().data());
      if (!r.error().ok()) return r.error();
      p.http.family = *fam;
      if (p.routes.empty()) p.routes.push_back(p.http.name);
      config.providers.push_back(std::move(p));
    }
  }

  if (auto it = root.find("default_prompt"); it != root.end() && !it->is_null()) {
    if (!it->is_string()) {
      return absl::InvalidArgumentError("default_prompt: must be a string");
    }
    config.default_prompt = it->get<std::string>();
  }

  if (const Json* s = Section(root, "rating", err)) {
    Reader r(*s, "rating");
    BTConfig& bt = config.rating.bt;
    r.Get("alpha", bt.alpha);
    r.Get("scale", bt.scale);
    r.Get("init_rating", bt.init_rating);
    r.Get("tie_weight", bt.tie_weight);
    r.Get("max_iterations", bt.max_iterations);
    r.Get("tolerance", bt.tolerance);
    r.Get("l2_penalty", bt.l2_penalty);
    r.Get("k_factor", config.rating.elo.k_factor);
    r.Get("bootstrap_rounds", config.rating.bootstrap_rounds);
    r.Get("seed", config.rating.seed);
    std::string anchor;
    r.Get("anchor", anchor);
    if (!anchor.empty()) {
      auto id = ModelId::Parse(anchor);
      if (!id.ok()) {
        r.Fail("anchor", id.status().message().data());
      } else {
        bt.anchor_model = *id;
      }
    }
    r.Positive("alpha", bt.alpha);
    r.Positive("scale", bt.scale);
    r.Positive("tolerance", bt.tolerance);
    r.Positive("max_iterations", bt.max_iterations);
    r.NonNegative("tie_weight", bt.tie_weight);
    r.NonNegative("l2_penalty", bt.l2_penalty);
    r.Positive("k_factor", config.rating.elo.k_factor);
    r.Positive("bootstrap_rounds", config.rating.bootstrap_rounds);
    if (!r.error().ok()) return r.error();
    config.rating.elo.alpha = bt.alpha;
    config.rating.elo.initial_rating = bt.init_rating;
  }

  if (const Json* s = Section(root, "limits", err)) {
    Reader r(*s, "limits");
    r.Get("max_image_bytes", config.limits.max_image_bytes);
    r.Get("battles_per_hour", config.limits.battles_per_hour);
    r.GetSeconds("session_ttl_seconds", config.limits.session_ttl);
    r.GetSeconds("leaderboard_interval_seconds", config.limits.leaderboard_interval);
    r.Positive("max_image_bytes", static_cast<double>(config.limits.max_image_bytes));
    r.NonNegative("battles_per_hour", config.limits.battles_per_hour);
    if (!r.error().ok()) return r.error();
  }

  if (const Json* s = Section(root, "retry", err)) {
    Reader r(*s, "retry");
    double backoff = absl::ToDoubleSeconds(config.retry.initial_backoff);
    r.Get("max_retries", config.retry.max_retries);
    r.Get("initial_backoff_seconds", backoff);
    r.Get("backoff_multiplier", config.retry.backoff_multiplier);
    r.NonNegative("max_retries", config.retry.max_retries);
    r.NonNegative("initial_backoff_seconds", backoff);
    if (!r.error().ok()) return r.error();
    config.retry.initial_backoff = absl::Seconds(backoff);
  }
  if (!err.ok()) return err;
  return config;
}

absl::StatusOr<ArenaConfig> LoadArenaConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        fmt::format("cannot read config file {}", path.string()));
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  auto config = ParseArenaConfig(text);
  if (!config.ok()) {
    return absl::InvalidArgumentError(
        fmt::format("{}: {}", path.string(), config.status().message()));
  }
  return config;
}

absl::StatusOr<std::shared_ptr<ProviderRouter>> BuildRouter(
    const ArenaConfig& config, bool mock_mode,
    std::shared_ptr<MockProvider>* mock) {
  auto router = std::make_shared<ProviderRouter>(config.registry, config.retry);
  if (mock_mode) {
    auto provider = std::make_shared<MockProvider>(config.rating.seed);
    router->Route("*", provider, 4);
    if (mock != nullptr) *mock = provider;
    return router;
  }
  if (config.providers.empty()) {
    return absl::FailedPreconditionError(
        "no providers configured (use mock mode for offline runs)");
  }
  for (const ProviderSettings& p : config.providers) {
    HttpProviderConfig http = p.http;
    const std::string var = CredentialEnvVar(http.name);
    const char* key = std::getenv(var.c_str());
    if (key == nullptr || *key == '\0') {
      return absl::FailedPreconditionError(
          fmt::format("credential variable {} is not set", var));
    }
    http.api_key = key;
    auto backend = std::make_shared<HttpProvider>(std::move(http));
    for (const std::string& route : p.routes) {
      router->Route(route, backend, p.max_concurrency);
    }
  }
  return router;
}

}  // namespace arena
