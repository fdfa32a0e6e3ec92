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

#ifndef ARENA_HTTP_API_H_
#define ARENA_HTTP_API_H_

#include <memory>
#include <string>

#include "absl/status/status.h"
#include "arena/arena_service.h"

namespace arena {

// HTTP status used to report `status` to clients.
int HttpStatusFor(const absl::Status& status);

struct HttpApiOptions {
  std::string static_dir;   // served at "/" when set
  std::string admin_token;  // required for ?refresh=1 on the leaderboard
  int worker_threads = 8;
};

// JSON API over an ArenaService:
//   POST /api/battles             multipart "image" + optional "prompt"
//   POST /api/battles/{id}/vote   {"choice": "left"|"right"|"tie"}
//   GET  /api/leaderboard
//   GET  /api/stats/pairwise
//   GET  /api/models
//   GET  /healthz
class HttpApi {
 public:
  HttpApi(ArenaService& service, HttpApiOptions options = {});
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Binds without serving. Port 0 picks a free port; returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Serves until Stop(); in-flight requests finish before this returns.
  absl::Status Serve();
  void Stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace arena

#endif  // ARENA_HTTP_API_H_
