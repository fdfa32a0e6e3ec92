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

#include "arena/http_api.h"

#include <regex>

#include "arena/format.h"
#include "httplib.h"
#include "json_codec.h"

namespace arena {
namespace {

using internal::Json;

constexpr char kJson[] = "application/json";

void SendError(httplib::Response& res, const absl::Status& status) {
  res.status = HttpStatusFor(status);
  Json body = {{"error", std::string(status.message())},
               {"retriable", status.code() == absl::StatusCode::kUnavailable ||
                                 status.code() == absl::StatusCode::kResourceExhausted}};
  res.set_content(body.dump(), kJson);
}

Json NullableNumber(const std::optional<double>& v) {
  return v.has_value() ? Json(*v) : Json(nullptr);
}

}  // namespace

int HttpStatusFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 200;
    case absl::StatusCode::kInvalidArgument:
      return 400;
    case absl::StatusCode::kNotFound:
      return 404;
    case absl::StatusCode::kAlreadyExists:
      return 409;
    case absl::StatusCode::kFailedPrecondition:
      return 410;
    case absl::StatusCode::kOutOfRange:
      return 413;
    case absl::StatusCode::kResourceExhausted:
      return 429;
    case absl::StatusCode::kUnavailable:
      return 503;
    default:
      return 500;
  }
}

struct HttpApi::Impl {
  ArenaService& service;
  HttpApiOptions options;
  httplib::Server server;
  bool bound = false;

  Impl(ArenaService& s, HttpApiOptions o) : service(s), options(std::move(o)) {}

  void Install();
};

void HttpApi::Impl::Install() {
  const int threads = options.worker_threads;
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server.set_payload_max_length(64 * 1024 * 1024);

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"status\":\"ok\"}", kJson);
  });

  server.Post("/api/battles", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    if (!req.is_multipart_form_data() || !req.has_file("image")) {
      SendError(res, absl::InvalidArgumentError(
                         "expected multipart form data with an \"image\" file"));
      return;
    }
    const httplib::MultipartFormData image = req.get_file_value("image");
    std::optional<MediaType> declared;
    if (!image.content_type.empty() &&
        image.content_type != "application/octet-stream") {
      auto type = MediaTypeFromMime(image.content_type);
      if (!type.ok()) {
        SendError(res, type.status());
        return;
      }
      declared = *type;
    }
    std::optional<std::string> prompt;
    if (req.has_file("prompt")) prompt = req.get_file_value("prompt").content;
    auto view = service.CreateBattle(image.content, declared, prompt,
                                     req.remote_addr);
    if (!view.ok()) {
      SendError(res, view.status());
      return;
    }
    res.status = 201;
    res.set_content(ClientBattleViewToJson(*view), kJson);
  });

  server.Post(R"(/api/battles/([0-9A-Za-z_-]+)/vote)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto body = internal::ParseJson(req.body);
                if (!body.ok() || !body->is_object()) {
                  SendError(res, absl::InvalidArgumentError(
                                     "body must be a JSON object"));
                  return;
                }
                auto name = internal::GetString(*body, "choice");
                if (!name.ok()) {
                  SendError(res, name.status());
                  return;
                }
                auto choice = VoteChoiceFromName(*name);
                if (!choice.ok()) {
                  SendError(res, choice.status());
                  return;
                }
                auto reveal = service.SubmitVote(req.matches[1].str(), *choice);
                if (!reveal.ok()) {
                  SendError(res, reveal.status());
                  return;
                }
                res.set_content(RevealViewToJson(*reveal), kJson);
              });

  server.Get("/api/leaderboard", [this](const httplib::Request& req,
                                        httplib::Response& res) {
    bool force = false;
    if (req.get_param_value("refresh") == "1") {
      if (options.admin_token.empty() ||
          req.get_header_value("X-Admin-Token") != options.admin_token) {
        res.status = 403;
        res.set_content("{\"error\":\"refresh requires the admin token\"}", kJson);
        return;
      }
      force = true;
    }
    auto snapshot = service.GetLeaderboard(force);
    res.set_header("X-Leaderboard-Status", snapshot->status);
    res.set_header("X-Leaderboard-Computed-At",
                   FormatTimestamp(snapshot->computed_at));
    Json rows = Json::array();
    if (snapshot->board.has_value()) {
      for (const LeaderboardEntry& e : snapshot->board->entries) {
        rows.push_back({{"rank", e.rank ? Json(*e.rank) : Json(nullptr)},
                        {"model", e.model.canonical()},
                        {"elo", NullableNumber(e.elo)},
                        {"ci_lower", NullableNumber(e.ci_lower)},
                        {"ci_upper", NullableNumber(e.ci_upper)},
                        {"battles", e.battles}});
      }
    }
    res.set_content(rows.dump(), kJson);
  });

  server.Get("/api/stats/pairwise", [this](const httplib::Request&,
                                           httplib::Response& res) {
    auto matrix = service.PairwiseStats();
    if (!matrix.ok()) {
      SendError(res, matrix.status());
      return;
    }
    res.set_content(PairwiseMatrixToJson(*matrix), kJson);
  });

  server.Get("/api/models", [this](const httplib::Request&,
                                   httplib::Response& res) {
    Json rows = Json::array();
    for (const RegistryEntry& e : service.ActiveModels()) {
      rows.push_back({{"id", e.id.canonical()},
                      {"display_name", e.display_name},
                      {"open_source", e.open_source}});
    }
    res.set_content(rows.dump(), kJson);
  });

  if (!options.static_dir.empty()) {
    server.set_mount_point("/", options.static_dir);
  }
}

HttpApi::HttpApi(ArenaService& service, HttpApiOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  impl_->Install();
}

HttpApi::~HttpApi() { Stop(); }

absl::StatusOr<int> HttpApi::Bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) {
    return absl::UnavailableError(
        fmt::format("cannot listen on {}:{} (address in use?)", host, port));
  }
  impl_->bound = true;
  return bound;
}

absl::Status HttpApi::Serve() {
  if (!impl_->bound) return absl::FailedPreconditionError("Bind() first");
  if (!impl_->server.listen_after_bind()) {
    return absl::InternalError("HTTP server stopped with an error");
  }
  return absl::OkStatus();
}

void HttpApi::Stop() {
  if (impl_ != nullptr) impl_->server.stop();
}

bool HttpApi::running() const { return impl_->server.is_running(); }

}  // namespace arena
