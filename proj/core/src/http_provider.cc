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

#include <openssl/evp.h>

#include <cctype>

#include "absl/time/clock.h"
#include "arena/format.h"
#include "arena/providers.h"
#include "httplib.h"
#include "json_codec.h"

namespace arena {

using internal::Json;

absl::StatusOr<ApiFamily> ApiFamilyFromName(std::string_view name) {
  if (name == "openai" || name == "openai-compatible") {
    return ApiFamily::kOpenAiCompatible;
  }
  if (name == "anthropic") return ApiFamily::kAnthropic;
  if (name == "gemini" || name == "google") return ApiFamily::kGemini;
  return absl::InvalidArgumentError(
      fmt::format("unknown API family '{}'", name));
}

std::string CredentialEnvVar(std::string_view provider_name) {
  std::string out = "GEOARENA_";
  for (char c : provider_name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c))
                      ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                      : '_');
  }
  out += "_API_KEY";
  return out;
}

std::string Base64Encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

namespace {

std::string UpstreamModel(const HttpProviderConfig& config, const ModelId& id) {
  if (auto it = config.model_map.find(id.canonical()); it != config.model_map.end()) {
    return it->second;
  }
  return config.send_canonical_id ? id.canonical() : std::string(id.name());
}

}  // namespace

HttpCall ShapeRequest(const HttpProviderConfig& config,
                      const GenerationRequest& request) {
  const std::string model = UpstreamModel(config, request.model);
  const std::string mime(MediaTypeMime(request.media_type));
  const std::string image64 = Base64Encode(request.image);
  const int max_tokens = request.max_output_tokens.value_or(config.default_max_tokens);

  HttpCall call;
  call.headers["Content-Type"] = "application/json";
  Json body;
  switch (config.family) {
    case ApiFamily::kOpenAiCompatible: {
      call.path = "/chat/completions";
      call.headers["Authorization"] = "Bearer " + config.api_key;
      body["model"] = model;
      body["max_tokens"] = max_tokens;
      body["messages"] = Json::array(
          {{{"role", "user"},
            {"content",
             Json::array({{{"type", "text"}, {"text", request.prompt}},
                          {{"type", "image_url"},
                           {"image_url",
                            {{"url", fmt::format("data:{};base64,{}", mime,
                                                 image64)}}}}})}}});
      break;
    }
    case ApiFamily::kAnthropic: {
      call.path = "/messages";
      call.headers["x-api-key"] = config.api_key;
      call.headers["anthropic-version"] = "2023-06-01";
      body["model"] = model;
      body["max_tokens"] = max_tokens;
      body["messages"] = Json::array(
          {{{"role", "user"},
            {"content",
             Json::array({{{"type", "image"},
                           {"source",
                            {{"type", "base64"},
                             {"media_type", mime},
                             {"data", image64}}}},
                          {{"type", "text"}, {"text", request.prompt}}})}}});
      break;
    }
    case ApiFamily::kGemini: {
      call.path = fmt::format("/models/{}:generateContent", model);
      call.headers["x-goog-api-key"] = config.api_key;
      body["contents"] = Json::array(
          {{{"role", "user"},
            {"parts",
             Json::array({{{"text", request.prompt}},
                          {{"inline_data",
                            {{"mime_type", mime}, {"data", image64}}}}})}}});
      body["generationConfig"] = {{"maxOutputTokens", max_tokens}};
      break;
    }
  }
  call.body = body.dump();
  return call;
}

absl::StatusOr<std::string> ParseResponseText(ApiFamily family,
                                              std::string_view body) {
  auto parsed = internal::ParseJson(body);
  if (!parsed.ok()) return parsed.status();
  const Json& j = *parsed;
  std::string text;
  try {
    switch (family) {
      case ApiFamily::kOpenAiCompatible: {
        const Json& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_string()) {
          text = content.get<std::string>();
        } else {
          for (const Json& part : content) {
            if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
          }
        }
        break;
      }
      case ApiFamily::kAnthropic:
        for (const Json& block : j.at("content")) {
          if (block.value("type", "") == "text") {
            text += block.at("text").get<std::string>();
          }
        }
        break;
      case ApiFamily::kGemini:
        for (const Json& part : j.at("candidates").at(0).at("content").at("parts")) {
          if (part.contains("text")) text += part.at("text").get<std::string>();
        }
        break;
    }
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("unexpected response shape: {}", e.what()));
  }
  if (text.empty()) {
    return absl::InvalidArgumentError("response contains no text");
  }
  return text;
}

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)) {
  const std::size_t scheme = config_.base_url.find("://");
  const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const std::size_t slash = config_.base_url.find('/', host_start);
  if (slash == std::string::npos) {
    origin_ = config_.base_url;
  } else {
    origin_ = config_.base_url.substr(0, slash);
    path_prefix_ = config_.base_url.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
}

GenerationResult HttpProvider::Generate(const GenerationRequest& request) {
  GenerationResult result{request.model};
  const HttpCall call = ShapeRequest(config_, request);
  const absl::Time start = absl::Now();

  httplib::Client client(origin_);
  const int64_t micros = absl::ToInt64Microseconds(request.timeout);
  client.set_connection_timeout(std::chrono::microseconds(micros));
  client.set_read_timeout(std::chrono::microseconds(micros));
  client.set_write_timeout(std::chrono::microseconds(micros));
  httplib::Headers headers;
  for (const auto& [k, v] : call.headers) {
    if (k != "Content-Type") headers.emplace(k, v);
  }
  auto res = client.Post(path_prefix_ + call.path, headers, call.body,
                         "application/json");
  result.latency = absl::Now() - start;

  if (!res) {
    const httplib::Error err = res.error();
    result.status = (err == httplib::Error::Read ||
                     err == httplib::Error::ConnectionTimeout)
                        ? ProviderStatus::kTimeout
                        : ProviderStatus::kProviderError;
    result.error = httplib::to_string(err);
    return result;
  }
  const int code = res->status;
  if (code == 429) {
    result.status = ProviderStatus::kRateLimited;
    result.error = "HTTP 429";
    return result;
  }
  if (code == 408 || code == 504) {
    result.status = ProviderStatus::kTimeout;
    result.error = fmt::format("HTTP {}", code);
    return result;
  }
  if (code < 200 || code >= 300) {
    result.status = ProviderStatus::kProviderError;
    result.error = fmt::format("HTTP {}: {}", code, res->body.substr(0, 200));
    result.retriable = code >= 500;
    return result;
  }
  auto text = ParseResponseText(config_.family, res->body);
  if (!text.ok()) {
    result.status = ProviderStatus::kProviderError;
    result.error = std::string(text.status().message());
    return result;
  }
  result.response_text = *std::move(text);
  result.status = ProviderStatus::kOk;
  return result;
}

}  // namespace arena
