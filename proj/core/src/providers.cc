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

#include "arena/providers.h"

#include <array>
#include <thread>

#include "absl/time/clock.h"
#include "arena/format.h"

namespace arena {

std::string DefaultPrompt(std::optional<std::string_view> configured) {
  if (configured && !configured->empty()) return std::string(*configured);
  return std::string(kBuiltinDefaultPrompt);
}

std::string_view ProviderStatusName(ProviderStatus status) {
  switch (status) {
    case ProviderStatus::kOk:
      return "OK";
    case ProviderStatus::kTimeout:
      return "TIMEOUT";
    case ProviderStatus::kRateLimited:
      return "RATE_LIMITED";
    case ProviderStatus::kProviderError:
      return "PROVIDER_ERROR";
  }
  return "PROVIDER_ERROR";
}

absl::Status ValidateGenerationRequest(const GenerationRequest& request) {
  if (request.image.empty()) {
    return absl::InvalidArgumentError("generation request has an empty image");
  }
  if (request.prompt.empty()) {
    return absl::InvalidArgumentError("generation request has an empty prompt");
  }
  if (request.timeout <= absl::ZeroDuration()) {
    return absl::InvalidArgumentError("generation timeout must be positive");
  }
  if (request.max_output_tokens && *request.max_output_tokens <= 0) {
    return absl::InvalidArgumentError("max_output_tokens must be positive");
  }
  return absl::OkStatus();
}

// ---- MockProvider ---------------------------------------------------------

namespace {

struct Place {
  const char* name;
  const char* country;
  const char* clue;
  double lat;
  double lon;
};

constexpr std::array<Place, 10> kPlaces = {{
    {"Paris", "France", "Haussmann-style limestone facades", 48.8566, 2.3522},
    {"Kyoto", "Japan", "wooden machiya townhouses", 35.0116, 135.7681},
    {"Cape Town", "South Africa", "a flat-topped mountain backdrop", -33.9249,
     18.4241},
    {"Reykjavik", "Iceland", "corrugated-metal houses and sparse trees",
     64.1466, -21.9426},
    {"Cusco", "Peru", "Inca stonework under colonial buildings", -13.5320,
     -71.9675},
    {"Perce", "Canada", "a limestone sea arch off the coast", 48.5243,
     -64.2130},
    {"Beijing", "China", "a lattice-steel stadium", 39.9929, 116.3965},
    {"Nadi", "Fiji", "coconut palms along a golf fairway", -17.7765,
     177.4356},
    {"Taupo", "New Zealand", "carvings on volcanic cliffs above a lake",
     -38.6857, 176.0702},
    {"Marrakesh", "Morocco", "red earthen walls and a minaret", 31.6295,
     -7.9811},
}};

constexpr std::array<const char*, 6> kExtraClues = {
    "the vegetation fits the local climate",
    "road markings follow the regional convention",
    "signage uses the local script",
    "the sun angle suggests this latitude",
    "the building materials are typical of the area",
    "vehicles drive on the expected side of the road",
};

uint64_t DigestWord(std::string_view hex, int word) {
  return std::stoull(std::string(hex.substr(16 * word, 16)), nullptr, 16);
}

}  // namespace

std::string MockProvider::Synthesize(const GenerationRequest& request) const {
  const std::string digest =
      Sha256Hex(fmt::format("{}\x1f{}\x1f{}\x1f{}", seed_,
                            request.model.canonical(), request.prompt,
                            Sha256Hex(request.image)));
  const uint64_t h0 = DigestWord(digest, 0);
  const uint64_t h1 = DigestWord(digest, 1);
  const uint64_t h2 = DigestWord(digest, 2);
  const Place& place = kPlaces[h0 % kPlaces.size()];

  std::string out;
  if (h1 & 1) out += "## Location analysis\n";
  out += fmt::format("The image most likely shows {}, {}.\n", place.name,
                     place.country);
  const int clues = 1 + static_cast<int>((h1 >> 1) % 4);
  out += fmt::format("- {}\n", place.clue);
  for (int i = 1; i < clues; ++i) {
    out += fmt::format("- {}\n", kExtraClues[(h2 + i) % kExtraClues.size()]);
  }
  if (h1 & 0x40) {
    out += fmt::format("Final answer: **{}**, {}", place.name, place.country);
  } else {
    out += fmt::format("Final answer: {}, {}", place.name, place.country);
  }
  if (h1 & 0x80) {
    out += fmt::format(" at ({:.4f}, {:.4f})", place.lat, place.lon);
  }
  out += ".";
  return out;
}

GenerationResult MockProvider::Generate(const GenerationRequest& request) {
  ++calls_;
  GenerationResult result{request.model};
  Responder responder;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (fail_next_ > 0) {
      --fail_next_;
      result.status = fail_next_status_;
      result.error = "injected failure";
      return result;
    }
    if (auto it = failing_.find(request.model); it != failing_.end()) {
      result.status = it->second;
      result.error = "injected failure";
      return result;
    }
    responder = responder_;
  }
  result.response_text = responder ? responder(request) : Synthesize(request);
  if (result.response_text.empty()) {
    result.status = ProviderStatus::kProviderError;
    result.error = "empty response";
    return result;
  }
  result.status = ProviderStatus::kOk;
  return result;
}

void MockProvider::SetResponder(Responder responder) {
  std::lock_guard<std::mutex> lock(mu_);
  responder_ = std::move(responder);
}

void MockProvider::FailModel(const ModelId& model, ProviderStatus status) {
  std::lock_guard<std::mutex> lock(mu_);
  failing_.insert_or_assign(model, status);
}

void MockProvider::ClearFailures() {
  std::lock_guard<std::mutex> lock(mu_);
  failing_.clear();
  fail_next_ = 0;
}

void MockProvider::FailNextCalls(int count, ProviderStatus status) {
  std::lock_guard<std::mutex> lock(mu_);
  fail_next_ = count;
  fail_next_status_ = status;
}

// ---- ProviderRouter -------------------------------------------------------

ProviderRouter::ProviderRouter(ModelRegistry registry, RetryPolicy retry)
    : registry_(std::move(registry)), retry_(retry) {}

void ProviderRouter::Route(std::string provider,
                           std::shared_ptr<Provider> backend,
                           int max_concurrency) {
  Backend b;
  b.provider = std::move(backend);
  b.slots = std::make_unique<std::counting_semaphore<>>(
      std::max(1, max_concurrency));
  backends_.insert_or_assign(std::move(provider), std::move(b));
}

ProviderRouter::Backend* ProviderRouter::FindBackend(const ModelId& model) {
  auto it = backends_.find(std::string(model.provider()));
  if (it == backends_.end()) it = backends_.find("*");
  return it == backends_.end() ? nullptr : &it->second;
}

absl::StatusOr<GenerationResult> ProviderRouter::Generate(
    const GenerationRequest& request) {
  if (absl::Status s = ValidateGenerationRequest(request); !s.ok()) return s;
  const RegistryEntry* entry = registry_.Find(request.model);
  if (entry == nullptr) {
    return absl::NotFoundError(
        fmt::format("model {} is not registered", request.model.canonical()));
  }
  if (!entry->active) {
    return absl::FailedPreconditionError(
        fmt::format("model {} is not active", request.model.canonical()));
  }
  Backend* backend = FindBackend(request.model);
  if (backend == nullptr) {
    return absl::FailedPreconditionError(fmt::format(
        "no provider configured for {}", request.model.canonical()));
  }

  ++requests_;
  absl::Duration backoff = retry_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    ++attempts_;
    const absl::Time start = absl::Now();
    backend->slots->acquire();
    GenerationResult result = backend->provider->Generate(request);
    backend->slots->release();
    if (result.latency == absl::ZeroDuration()) {
      result.latency = absl::Now() - start;
    }
    result.model = request.model;
    if (result.status == ProviderStatus::kOk && result.response_text.empty()) {
      result.status = ProviderStatus::kProviderError;
      result.error = "provider returned an empty response";
    }
    if (result.status == ProviderStatus::kOk) {
      ++successes_;
      return result;
    }
    result.response_text.clear();
    if (!result.retriable || attempt >= retry_.max_retries) {
      ++failures_;
      return result;
    }
    absl::SleepFor(backoff);
    backoff *= retry_.backoff_multiplier;
  }
}

ProviderMetrics ProviderRouter::metrics() const {
  return {requests_.load(), attempts_.load(), successes_.load(),
          failures_.load()};
}

}  // namespace arena
