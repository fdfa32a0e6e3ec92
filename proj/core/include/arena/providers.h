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

#ifndef ARENA_PROVIDERS_H_
#define ARENA_PROVIDERS_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "arena/image_store.h"
#include "arena/model.h"
#include "arena/registry.h"

namespace arena {

// Instruction used when a user submits an image without a prompt.
inline constexpr std::string_view kBuiltinDefaultPrompt =
    "Identify where this photo was taken. Give the most specific location you "
    "can (country, region, city or landmark, and latitude/longitude if "
    "possible), and explain the visual evidence in the image that supports "
    "your answer.";

// The configured default instruction, falling back to the built-in one.
std::string DefaultPrompt(std::optional<std::string_view> configured = std::nullopt);

struct GenerationRequest {
  ModelId model;
  std::string prompt;
  std::string image;  // raw bytes
  MediaType media_type = MediaType::kJpeg;
  absl::Duration timeout = absl::Seconds(60);
  std::optional<int> max_output_tokens;
};

enum class ProviderStatus { kOk, kTimeout, kRateLimited, kProviderError };

std::string_view ProviderStatusName(ProviderStatus status);

struct GenerationResult {
  ModelId model;
  std::string response_text;  // non-empty iff status == kOk
  absl::Duration latency = absl::ZeroDuration();
  ProviderStatus status = ProviderStatus::kProviderError;
  std::string error;
  // False for failures that a retry cannot fix (e.g. a rejected request).
  bool retriable = true;
};

// Non-empty image with a supported media type and a non-empty prompt.
absl::Status ValidateGenerationRequest(const GenerationRequest& request);

// One backend able to answer generation requests. Implementations perform a
// single attempt, report failures through GenerationResult::status and never
// throw.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual GenerationResult Generate(const GenerationRequest& request) = 0;
};

// Offline provider. Responses are a pure function of (seed, model, prompt,
// image digest): templated markdown naming a place, never the model.
class MockProvider : public Provider {
 public:
  using Responder = std::function<std::string(const GenerationRequest&)>;

  explicit MockProvider(uint64_t seed = 0) : seed_(seed) {}

  GenerationResult Generate(const GenerationRequest& request) override;

  // Replaces the templated text; used to script judge and annotator output.
  void SetResponder(Responder responder);
  // Every request for `model` fails with `status` until cleared.
  void FailModel(const ModelId& model, ProviderStatus status);
  void ClearFailures();
  // Fails the next `count` calls (any model) with `status`.
  void FailNextCalls(int count, ProviderStatus status);

  int64_t calls() const { return calls_.load(); }

 private:
  std::string Synthesize(const GenerationRequest& request) const;

  const uint64_t seed_;
  std::mutex mu_;
  Responder responder_;  // guarded by mu_
  std::map<ModelId, ProviderStatus> failing_;  // guarded by mu_
  int fail_next_ = 0;  // guarded by mu_
  ProviderStatus fail_next_status_ = ProviderStatus::kProviderError;
  std::atomic<int64_t> calls_{0};
};

struct RetryPolicy {
  int max_retries = 2;
  absl::Duration initial_backoff = absl::Milliseconds(500);
  double backoff_multiplier = 2.0;
};

struct ProviderMetrics {
  int64_t requests = 0;
  int64_t attempts = 0;
  int64_t successes = 0;
  int64_t failures = 0;
};

// Dispatches requests to the backend serving each model, enforcing registry
// membership, retries with exponential backoff, and a per-backend
// concurrency cap. Safe for concurrent use.
class ProviderRouter {
 public:
  ProviderRouter(ModelRegistry registry, RetryPolicy retry = {});

  // Serves every model whose provider part equals `provider` ("*" matches
  // any provider without a more specific route).
  void Route(std::string provider, std::shared_ptr<Provider> backend,
             int max_concurrency = 4);

  // InvalidArgument for malformed requests, NotFound / FailedPrecondition for
  // unknown or inactive models. Provider failures come back as an OK StatusOr
  // carrying a non-kOk GenerationResult::status.
  absl::StatusOr<GenerationResult> Generate(const GenerationRequest& request);

  const ModelRegistry& registry() const { return registry_; }
  ProviderMetrics metrics() const;

 private:
  struct Backend {
    std::shared_ptr<Provider> provider;
    std::unique_ptr<std::counting_semaphore<>> slots;
  };

  Backend* FindBackend(const ModelId& model);

  const ModelRegistry registry_;
  const RetryPolicy retry_;
  std::map<std::string, Backend> backends_;
  std::atomic<int64_t> requests_{0};
  std::atomic<int64_t> attempts_{0};
  std::atomic<int64_t> successes_{0};
  std::atomic<int64_t> failures_{0};
};

// ---- HTTP backends ------------------------------------------------------

enum class ApiFamily { kOpenAiCompatible, kAnthropic, kGemini };

absl::StatusOr<ApiFamily> ApiFamilyFromName(std::string_view name);

struct HttpProviderConfig {
  std::string name;  // e.g. "openai"; names the credential variable
  ApiFamily family = ApiFamily::kOpenAiCompatible;
  // scheme://host[:port][/prefix] including the API version segment, e.g.
  // https://api.openai.com/v1 or https://generativelanguage.googleapis.com/v1beta
  std::string base_url;
  std::string api_key;
  // Canonical ModelId -> upstream model name. Unmapped models use their name
  // part, or the full canonical id for OpenAI-compatible aggregators when
  // `send_canonical_id` is set.
  std::map<std::string, std::string> model_map;
  bool send_canonical_id = false;
  int default_max_tokens = 1024;
};

// "GEOARENA_<NAME>_API_KEY" with the name upper-cased and non-alphanumerics
// replaced by '_'.
std::string CredentialEnvVar(std::string_view provider_name);

struct HttpCall {
  std::string path;
  std::map<std::string, std::string> headers;
  std::string body;
};

// Builds the family-specific request for `request`.
HttpCall ShapeRequest(const HttpProviderConfig& config,
                      const GenerationRequest& request);

// Extracts the generated text from a successful response body.
absl::StatusOr<std::string> ParseResponseText(ApiFamily family,
                                              std::string_view body);

std::string Base64Encode(std::string_view bytes);

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  GenerationResult Generate(const GenerationRequest& request) override;

 private:
  HttpProviderConfig config_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. "/api"
};

}  // namespace arena

#endif  // ARENA_PROVIDERS_H_
