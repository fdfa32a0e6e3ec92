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

#ifndef ARENA_TOOLS_CLI_H_
#define ARENA_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace arena::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;     // bad flags or configuration
inline constexpr int kExitData = 2;      // unreadable or insufficient data
inline constexpr int kExitProvider = 3;  // model provider failure

// Runs the `arena` command line. `args` excludes the program name. Reports
// go to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace arena::cli

#endif  // ARENA_TOOLS_CLI_H_
