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

#include "cli.h"

#include <signal.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "arena/analysis.h"
#include "arena/arena_service.h"
#include "arena/battle_log.h"
#include "arena/config.h"
#include "arena/format.h"
#include "arena/http_api.h"
#include "arena/image_store.h"
#include "arena/judge.h"
#include "arena/leaderboard.h"
#include "arena/simulator.h"
#include "arena/style_features.h"
#include "json.hpp"

namespace arena::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
      return kExitUsage;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDeadlineExceeded:
    case absl::StatusCode::kResourceExhausted:
      return kExitProvider;
    default:
      return kExitData;
  }
}

int Fail(std::ostream& err, const absl::Status& status, int code) {
  err << "error: " << status.message() << "\n";
  return code;
}

absl::StatusOr<ArenaConfig> LoadConfigOrDefault(const std::string& path) {
  if (path.empty()) return ArenaConfig{};
  return LoadArenaConfig(path);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(fmt::format("cannot read {}", path));
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Reads the whole log, reporting skipped lines on `err`.
absl::StatusOr<std::vector<BattleRecord>> LoadBattles(const std::string& path,
                                                      std::ostream& err) {
  auto read = ReadBattles(path);
  if (!read.ok()) return read.status();
  for (const std::string& w : read->warnings) err << "warning: " << w << "\n";
  return std::move(read->records);
}

struct CommonRating {
  std::string config_path;
  std::string anchor;
  std::optional<double> tie_weight;
  std::optional<double> l2;
};

absl::StatusOr<BTConfig> ResolveBT(const ArenaConfig& config,
                                   const CommonRating& flags) {
  BTConfig bt = config.rating.bt;
  if (!flags.anchor.empty()) {
    auto id = ModelId::Parse(flags.anchor);
    if (!id.ok()) {
      return absl::InvalidArgumentError(
          fmt::format("--anchor: {}", id.status().message()));
    }
    bt.anchor_model = *id;
  }
  if (flags.tie_weight) bt.tie_weight = *flags.tie_weight;
  if (flags.l2) bt.l2_penalty = *flags.l2;
  if (absl::Status s = ValidateBTConfig(bt); !s.ok()) {
    return absl::InvalidArgumentError(s.message());
  }
  return bt;
}

// ---------------------------------------------------------------- serve

struct ServeFlags {
  std::string config_path;
  bool mock = false;
  bool create_dirs = false;
  std::string host;
  int port = -1;
  std::string log_path;
  std::string image_dir;
  std::string static_dir;
};

// Blocks SIGINT/SIGTERM for the process and waits for them on a helper
// thread, so shutdown never runs inside a signal handler.
class SignalWaiter {
 public:
  // Blocks SIGINT/SIGTERM in the calling thread. Construct before starting any
  // thread so every thread inherits the mask and signals queue for Watch().
  SignalWaiter() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, &previous_);
  }
  ~SignalWaiter() {
    done_ = true;
    if (thread_.joinable()) thread_.join();
    pthread_sigmask(SIG_SETMASK, &previous_, nullptr);
  }

  // Runs `on_signal` once on a watcher thread when a signal arrives.
  void Watch(std::function<void()> on_signal) {
    thread_ = std::thread([this, on_signal = std::move(on_signal)] {
      const timespec tick{0, 100'000'000};
      while (!done_) {
        if (sigtimedwait(&set_, nullptr, &tick) > 0) {
          on_signal();
          return;
        }
      }
    });
  }

 private:
  sigset_t set_;
  sigset_t previous_;
  std::atomic<bool> done_{false};
  std::thread thread_;
};

int RunServe(const ServeFlags& flags, std::ostream& out, std::ostream& err) {
  auto config = LoadConfigOrDefault(flags.config_path);
  if (!config.ok()) return Fail(err, config.status(), kExitUsage);
  if (!flags.host.empty()) config->server.host = flags.host;
  if (flags.port >= 0) config->server.port = flags.port;
  if (!flags.log_path.empty()) config->storage.log_path = flags.log_path;
  if (!flags.image_dir.empty()) config->storage.image_dir = flags.image_dir;
  if (!flags.static_dir.empty()) config->server.static_dir = flags.static_dir;

  const fs::path log_path = config->storage.log_path;
  const fs::path image_dir = config->storage.image_dir;
  for (const fs::path& dir :
       {log_path.parent_path().empty() ? fs::path(".") : log_path.parent_path(),
        image_dir}) {
    if (fs::is_directory(dir)) continue;
    if (!flags.create_dirs) {
      return Fail(err,
                  absl::NotFoundError(fmt::format(
                      "directory {} does not exist (pass --create-dirs to create it)",
                      dir.string())),
                  kExitUsage);
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      return Fail(err,
                  absl::UnavailableError(fmt::format("cannot create {}: {}",
                                                     dir.string(), ec.message())),
                  kExitUsage);
    }
  }

  SignalWaiter signals;
  auto router = BuildRouter(*config, flags.mock);
  if (!router.ok()) return Fail(err, router.status(), kExitUsage);
  auto log = BattleLog::Open(log_path);
  if (!log.ok()) return Fail(err, log.status(), kExitData);
  auto images = std::make_shared<ImageStore>(image_dir);

  ServiceOptions options;
  options.max_image_bytes = config->limits.max_image_bytes;
  options.battles_per_hour = config->limits.battles_per_hour;
  options.session_ttl = config->limits.session_ttl;
  options.leaderboard_interval = config->limits.leaderboard_interval;
  options.default_prompt = config->default_prompt;
  options.bt = config->rating.bt;
  options.bootstrap_rounds = config->rating.bootstrap_rounds;
  options.bootstrap_seed = config->rating.seed;
  ArenaService service(options, *router, std::shared_ptr<BattleLog>(std::move(*log)),
                       images);

  HttpApi api(service, HttpApiOptions{.static_dir = config->server.static_dir,
                                      .admin_token = config->server.admin_token});
  auto port = api.Bind(config->server.host, config->server.port);
  if (!port.ok()) return Fail(err, port.status(), kExitUsage);
  service.StartBackgroundTasks();
  err << fmt::format("listening on http://{}:{}{}\n", config->server.host, *port,
                     flags.mock ? " (mock providers)" : "");
  out.flush();
  err.flush();
  signals.Watch([&api] { api.Stop(); });
  const absl::Status served = api.Serve();
  service.Stop();
  if (!served.ok()) return Fail(err, served, kExitData);
  err << "shut down cleanly\n";
  return kExitOk;
}

// ---------------------------------------------------------- leaderboard

struct LeaderboardFlags {
  std::string log_path;
  CommonRating rating;
  int rounds = -1;
  std::optional<uint64_t> seed;
  int threads = 1;
  bool style_control = false;
  std::string format = "table";
};

int RunLeaderboard(const LeaderboardFlags& flags, std::ostream& out,
                   std::ostream& err) {
  auto config = LoadConfigOrDefault(flags.rating.config_path);
  if (!config.ok()) return Fail(err, config.status(), kExitUsage);
  auto bt = ResolveBT(*config, flags.rating);
  if (!bt.ok()) return Fail(err, bt.status(), kExitUsage);
  auto battles = LoadBattles(flags.log_path, err);
  if (!battles.ok()) return Fail(err, battles.status(), kExitData);

  LeaderboardOptions options;
  options.rounds = flags.rounds > 0 ? flags.rounds : config->rating.bootstrap_rounds;
  options.seed = flags.seed.value_or(config->rating.seed);
  options.threads = flags.threads;
  options.style_control = flags.style_control;
  auto board = ComputeLeaderboard(*battles, *bt, options);
  if (!board.ok()) {
    if (absl::IsFailedPrecondition(board.status())) {
      err << "insufficient data: " << board.status().message() << "\n";
      return kExitData;
    }
    return Fail(err, board.status(), ExitCodeFor(board.status()));
  }
  for (const std::string& w : board->warnings) err << "warning: " << w << "\n";

  const auto& beta = board->fit.style_coefficients;
  if (flags.format == "json") {
    if (flags.style_control && beta.has_value()) {
      Json combined = {{"leaderboard", Json::parse(LeaderboardToJson(*board))},
                       {"style_coefficients",
                        nlohmann::ordered_json::parse(StyleCoefficientsToJson(*beta))}};
      out << combined.dump(2) << "\n";
    } else {
      out << LeaderboardToJson(*board) << "\n";
    }
  } else {
    out << LeaderboardToTable(*board);
    if (flags.style_control && beta.has_value()) {
      out << "\n" << StyleCoefficientsToTable(*beta);
    }
  }
  return kExitOk;
}

// -------------------------------------------------------------- analyze

struct AnalyzeFlags {
  std::string log_path;
  bool pairwise = false;
  bool composition = false;
  bool features = false;
  std::string annotations;
  std::string csv_prefix;
};

std::string FeaturesCsv(std::span<const BattleRecord> battles) {
  std::string out = "battle_id,model_a,model_b";
  for (std::string_view side : {"a", "b", "diff"}) {
    for (std::string_view name : kStyleFeatureNames) {
      out += fmt::format(",{}_{}", name, side);
    }
  }
  out += "\n";
  for (const BattleRecord& b : battles) {
    const StyleFeatures fa = ExtractFeatures(b.response_a);
    const StyleFeatures fb = ExtractFeatures(b.response_b);
    const StyleVector diff = FeatureDifference(fa, fb);
    out += fmt::format("{},{},{}", b.battle_id, b.model_a.canonical(),
                       b.model_b.canonical());
    for (const StyleFeatures& f : {fa, fb}) {
      out += fmt::format(",{},{},{},{},{}", f.response_length, f.lists_count,
                         f.headers_count, f.emphasis_count,
                         f.has_gps_output ? 1 : 0);
    }
    for (double d : diff) out += fmt::format(",{:.6f}", d);
    out += "\n";
  }
  return out;
}

int RunAnalyze(const AnalyzeFlags& flags, std::ostream& out, std::ostream& err) {
  const int chosen = int{flags.pairwise} + int{flags.composition} + int{flags.features};
  if (chosen != 1) {
    err << "error: choose exactly one of --pairwise, --composition, --features\n";
    return kExitUsage;
  }
  if (flags.composition) {
    if (flags.annotations.empty()) {
      err << "error: --composition needs --annotations <file.jsonl> with one "
             "image annotation per line\n";
      return kExitUsage;
    }
    auto annotations = ReadAnnotations(flags.annotations);
    if (!annotations.ok()) return Fail(err, annotations.status(), kExitData);
    out << CompositionToJson(DatasetComposition(*annotations)) << "\n";
    return kExitOk;
  }
  auto battles = LoadBattles(flags.log_path, err);
  if (!battles.ok()) return Fail(err, battles.status(), kExitData);
  if (flags.features) {
    out << FeaturesCsv(*battles);
    return kExitOk;
  }
  const PairwiseMatrix matrix = ComputePairwiseMatrix(*battles);
  out << PairwiseMatrixToJson(matrix) << "\n";
  if (!flags.csv_prefix.empty()) {
    for (const auto& [suffix, body] :
         {std::pair<std::string, std::string>{"_win_rate.csv", WinRateToCsv(matrix)},
          {"_battle_count.csv", BattleCountToCsv(matrix)}}) {
      const std::string path = flags.csv_prefix + suffix;
      std::ofstream file(path, std::ios::binary);
      if (!(file << body)) {
        return Fail(err, absl::UnavailableError(fmt::format("cannot write {}", path)),
                    kExitData);
      }
      err << "wrote " << path << "\n";
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------- simulate

struct SimulateFlags {
  std::string world_path;
  int64_t n = 1000;
  std::optional<uint64_t> seed;
  std::string out_path;
};

int RunSimulate(const SimulateFlags& flags, std::ostream& out, std::ostream& err) {
  auto text = ReadFile(flags.world_path);
  if (!text.ok()) return Fail(err, text.status(), kExitUsage);
  auto world = ParseWorldSpec(*text);
  if (!world.ok()) {
    return Fail(err,
                absl::InvalidArgumentError(fmt::format(
                    "{}: {}", flags.world_path, world.status().message())),
                kExitUsage);
  }
  if (flags.seed) world->seed = *flags.seed;
  if (flags.n <= 0) {
    err << "error: -n must be positive\n";
    return kExitUsage;
  }
  const std::vector<BattleRecord> battles = Simulate(*world, flags.n);
  std::string body;
  for (const BattleRecord& b : battles) {
    body += BattleRecordToJsonLine(b);
    body += "\n";
  }
  if (flags.out_path.empty() || flags.out_path == "-") {
    out << body;
    err << WorldSummary(*world);
  } else {
    std::ofstream file(flags.out_path, std::ios::binary | std::ios::trunc);
    if (!(file << body)) {
      return Fail(err,
                  absl::UnavailableError(fmt::format("cannot write {}", flags.out_path)),
                  kExitData);
    }
    out << fmt::format("wrote {} battles to {}\n", battles.size(), flags.out_path);
    out << WorldSummary(*world);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- judge

struct JudgeFlags {
  std::string log_path;
  std::string config_path;
  std::string judge_model;
  int sample = 100;
  uint64_t seed = 0;
  std::string mock_judge;
  std::string image_dir;
  std::string verdicts_path;
  std::string format = "text";
  int concurrency = 4;
};

// Scripted judges for offline runs: "echo" repeats the human label, "const:T"
// always answers T, and "file:PATH" replays {battle_id, raw_text} JSONL.
absl::StatusOr<MockProvider::Responder> MockJudgeResponder(
    const std::string& spec, std::span<const BattleRecord> battles) {
  std::map<std::string, std::string> by_prompt;
  auto index = [&](auto&& answer) {
    for (const BattleRecord& b : battles) {
      by_prompt[RenderJudgePrompt(b.prompt, b.response_a, b.response_b)] = answer(b);
    }
  };
  if (spec == "echo") {
    index([](const BattleRecord& b) {
      return std::string(JudgeLabelName(LabelForOutcome(b.outcome)));
    });
  } else if (spec.starts_with("const:")) {
    const std::string text = spec.substr(6);
    return MockProvider::Responder(
        [text](const GenerationRequest&) { return text; });
  } else if (spec.starts_with("file:")) {
    auto text = ReadFile(spec.substr(5));
    if (!text.ok()) return text.status();
    std::map<std::string, std::string> by_id;
    std::istringstream lines(*text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      Json j = Json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("battle_id") || !j.contains("raw_text")) {
        return absl::InvalidArgumentError(
            "mock judge file lines need battle_id and raw_text");
      }
      by_id[j["battle_id"].get<std::string>()] = j["raw_text"].get<std::string>();
    }
    index([&by_id](const BattleRecord& b) {
      auto it = by_id.find(b.battle_id);
      return it == by_id.end() ? std::string() : it->second;
    });
  } else {
    return absl::InvalidArgumentError(
        "--mock-judge must be echo, const:<text> or file:<path>");
  }
  return MockProvider::Responder(
      [by_prompt = std::move(by_prompt)](const GenerationRequest& r) {
        auto it = by_prompt.find(r.prompt);
        return it == by_prompt.end() ? std::string() : it->second;
      });
}

int RunJudge(const JudgeFlags& flags, std::ostream& out, std::ostream& err) {
  auto config = LoadConfigOrDefault(flags.config_path);
  if (!config.ok()) return Fail(err, config.status(), kExitUsage);
  auto judge_model = ModelId::Parse(flags.judge_model);
  if (!judge_model.ok()) {
    return Fail(err,
                absl::InvalidArgumentError(fmt::format(
                    "--judge-model: {}", judge_model.status().message())),
                kExitUsage);
  }
  auto battles = LoadBattles(flags.log_path, err);
  if (!battles.ok()) return Fail(err, battles.status(), kExitData);
  if (battles->size() < static_cast<std::size_t>(std::max(flags.sample, 1))) {
    err << fmt::format("error: insufficient sample: the log has {} battles, "
                       "--sample asks for {}\n",
                       battles->size(), flags.sample);
    return kExitData;
  }

  const bool mock = !flags.mock_judge.empty();
  if (mock && config->registry.Find(*judge_model) == nullptr) {
    (void)config->registry.Add(
        RegistryEntry{*judge_model, judge_model->canonical(), false, true});
  }
  std::shared_ptr<MockProvider> mock_provider;
  auto router = BuildRouter(*config, mock, &mock_provider);
  if (!router.ok()) return Fail(err, router.status(), kExitUsage);
  if (mock) {
    auto responder = MockJudgeResponder(flags.mock_judge, *battles);
    if (!responder.ok()) return Fail(err, responder.status(), kExitUsage);
    mock_provider->SetResponder(*std::move(responder));
  }
  std::shared_ptr<const ImageStore> store;
  if (!flags.image_dir.empty()) store = std::make_shared<ImageStore>(flags.image_dir);
  Judge judge(*router, *judge_model, StoreImageLoader(store, true));

  auto report = RunAlignmentStudy(
      judge, *battles,
      AlignmentOptions{.sample_size = flags.sample,
                       .seed = flags.seed,
                       .concurrency = mock ? 1 : flags.concurrency});
  if (!report.ok()) return Fail(err, report.status(), ExitCodeFor(report.status()));

  if (!flags.verdicts_path.empty()) {
    std::ofstream file(flags.verdicts_path, std::ios::binary | std::ios::trunc);
    for (const JudgeVerdict& v : report->verdicts) file << JudgeVerdictToJsonLine(v) << "\n";
    if (!file) {
      return Fail(err,
                  absl::UnavailableError(
                      fmt::format("cannot write {}", flags.verdicts_path)),
                  kExitData);
    }
  }
  out << (flags.format == "json" ? AlignmentReportToJson(*report) + "\n"
                                 : AlignmentReportToText(*report));
  return kExitOk;
}

// ------------------------------------------------------------- annotate

struct AnnotateFlags {
  std::string log_path;
  std::string config_path;
  std::string annotator;
  std::string image_dir;
  std::string mock_annotator;  // JSONL {sha256, raw_text}
  std::string out_path;
};

int RunAnnotate(const AnnotateFlags& flags, std::ostream& out, std::ostream& err) {
  auto config = LoadConfigOrDefault(flags.config_path);
  if (!config.ok()) return Fail(err, config.status(), kExitUsage);
  auto annotator = ModelId::Parse(flags.annotator);
  if (!annotator.ok()) {
    return Fail(err,
                absl::InvalidArgumentError(fmt::format(
                    "--annotator: {}", annotator.status().message())),
                kExitUsage);
  }
  auto battles = LoadBattles(flags.log_path, err);
  if (!battles.ok()) return Fail(err, battles.status(), kExitData);

  const bool mock = !flags.mock_annotator.empty();
  if (mock && config->registry.Find(*annotator) == nullptr) {
    (void)config->registry.Add(
        RegistryEntry{*annotator, annotator->canonical(), false, true});
  }
  std::shared_ptr<MockProvider> mock_provider;
  auto router = BuildRouter(*config, mock, &mock_provider);
  if (!router.ok()) return Fail(err, router.status(), kExitUsage);

  std::map<std::string, ImageRef> images;
  for (const BattleRecord& b : *battles) images.emplace(b.image_ref.sha256, b.image_ref);
  if (mock) {
    auto text = ReadFile(flags.mock_annotator);
    if (!text.ok()) return Fail(err, text.status(), kExitUsage);
    std::map<std::string, std::string> by_sha;
    std::istringstream lines(*text);
    std::string line;
    while (std::getline(lines, line)) {
      Json j = Json::parse(line, nullptr, false);
      if (j.is_object() && j.contains("sha256") && j.contains("raw_text")) {
        by_sha[j["sha256"].get<std::string>()] = j["raw_text"].get<std::string>();
      }
    }
    // Answers are keyed by the digest of the bytes the annotator receives.
    mock_provider->SetResponder([by_sha = std::move(by_sha)](const GenerationRequest& r) {
      auto it = by_sha.find(Sha256Hex(r.image));
      return it == by_sha.end() ? std::string() : it->second;
    });
  }
  std::shared_ptr<const ImageStore> store;
  if (!flags.image_dir.empty()) store = std::make_shared<ImageStore>(flags.image_dir);
  const ImageLoader loader = StoreImageLoader(store, true);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!flags.out_path.empty()) {
    file.open(flags.out_path, std::ios::binary | std::ios::trunc);
    sink = &file;
  }
  int rejected = 0;
  for (const auto& [sha, ref] : images) {
    auto annotation = AnnotateImage(**router, *annotator, ref, loader);
    if (!annotation.ok()) {
      if (absl::IsUnavailable(annotation.status())) {
        return Fail(err, annotation.status(), kExitProvider);
      }
      err << "warning: " << annotation.status().message() << "\n";
      ++rejected;
      continue;
    }
    *sink << ImageAnnotationToJsonLine(*annotation) << "\n";
  }
  err << fmt::format("annotated {} images, {} rejected\n",
                     images.size() - rejected, rejected);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Pairwise-preference arena for image geolocalization models",
               "arena"};
  app.require_subcommand(1);

  ServeFlags serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the battle service");
  serve_cmd->add_option("--config", serve.config_path, "JSON configuration file");
  serve_cmd->add_flag("--mock", serve.mock, "Serve every model with the offline mock");
  serve_cmd->add_flag("--create-dirs", serve.create_dirs,
                      "Create missing log and image directories");
  serve_cmd->add_option("--host", serve.host, "Listen address");
  serve_cmd->add_option("--port", serve.port, "Listen port (0 picks one)");
  serve_cmd->add_option("--log", serve.log_path, "Battle log path");
  serve_cmd->add_option("--images", serve.image_dir, "Image store directory");
  serve_cmd->add_option("--static-dir", serve.static_dir, "Web client to serve at /");

  LeaderboardFlags board;
  CLI::App* board_cmd = app.add_subcommand("leaderboard", "Rate models from a battle log");
  board_cmd->add_option("log", board.log_path, "Battle log (JSONL)")->required();
  board_cmd->add_option("--config", board.rating.config_path, "JSON configuration file");
  board_cmd->add_option("--anchor", board.rating.anchor,
                        "Model pinned at the initial rating");
  board_cmd->add_option("--rounds", board.rounds, "Bootstrap rounds");
  board_cmd->add_option("--seed", board.seed, "Bootstrap seed");
  board_cmd->add_option("--threads", board.threads, "Bootstrap worker threads")
      ->check(CLI::PositiveNumber);
  board_cmd->add_option("--tie-weight", board.rating.tie_weight,
                        "Half-win credit per tie (0 drops ties)");
  board_cmd->add_option("--l2", board.rating.l2, "L2 penalty on log-strengths");
  board_cmd->add_flag("--style-control", board.style_control,
                      "Control for response style features");
  board_cmd->add_option("--format", board.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}));

  AnalyzeFlags analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Descriptive statistics");
  analyze_cmd->add_option("log", analyze.log_path, "Battle log (JSONL)");
  analyze_cmd->add_flag("--pairwise", analyze.pairwise,
                        "Pairwise win-rate and battle-count matrices (JSON)");
  analyze_cmd->add_flag("--composition", analyze.composition,
                        "Image attribute percentages from --annotations");
  analyze_cmd->add_flag("--features", analyze.features, "Per-battle style features (CSV)");
  analyze_cmd->add_option("--annotations", analyze.annotations,
                          "Image annotations (JSONL)");
  analyze_cmd->add_option("--csv-prefix", analyze.csv_prefix,
                          "Also write <prefix>_win_rate.csv and <prefix>_battle_count.csv");

  SimulateFlags simulate;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Write a synthetic battle log");
  sim_cmd->add_option("--world", simulate.world_path, "World spec (JSON)")->required();
  sim_cmd->add_option("-n,--battles", simulate.n, "Number of battles");
  sim_cmd->add_option("--seed", simulate.seed, "Overrides the spec's seed");
  sim_cmd->add_option("--out", simulate.out_path, "Output log path ('-' for stdout)");

  JudgeFlags judge;
  CLI::App* judge_cmd = app.add_subcommand("judge", "Judge/human agreement study");
  judge_cmd->add_option("log", judge.log_path, "Battle log (JSONL)")->required();
  judge_cmd->add_option("--judge-model", judge.judge_model, "Judge model id")->required();
  judge_cmd->add_option("--sample", judge.sample, "Battles to sample");
  judge_cmd->add_option("--seed", judge.seed, "Sampling seed");
  judge_cmd->add_option("--config", judge.config_path, "JSON configuration file");
  judge_cmd->add_option("--mock-judge", judge.mock_judge,
                        "Offline judge: echo, const:<text> or file:<jsonl>");
  judge_cmd->add_option("--images", judge.image_dir, "Image store directory");
  judge_cmd->add_option("--verdicts", judge.verdicts_path, "Write verdicts (JSONL)");
  judge_cmd->add_option("--concurrency", judge.concurrency, "Parallel judge calls")
      ->check(CLI::PositiveNumber);
  judge_cmd->add_option("--format", judge.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));

  AnnotateFlags annotate;
  CLI::App* annotate_cmd =
      app.add_subcommand("annotate", "Annotate the images referenced by a log");
  annotate_cmd->add_option("log", annotate.log_path, "Battle log (JSONL)")->required();
  annotate_cmd->add_option("--annotator", annotate.annotator, "Annotator model id")
      ->required();
  annotate_cmd->add_option("--config", annotate.config_path, "JSON configuration file");
  annotate_cmd->add_option("--images", annotate.image_dir, "Image store directory");
  annotate_cmd->add_option("--mock-annotator", annotate.mock_annotator,
                           "Offline answers: JSONL {sha256, raw_text}");
  annotate_cmd->add_option("--out", annotate.out_path, "Output path (JSONL)");

  std::vector<const char*> argv = {"arena"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (serve_cmd->parsed()) return RunServe(serve, out, err);
  if (board_cmd->parsed()) return RunLeaderboard(board, out, err);
  if (analyze_cmd->parsed()) return RunAnalyze(analyze, out, err);
  if (sim_cmd->parsed()) return RunSimulate(simulate, out, err);
  if (judge_cmd->parsed()) return RunJudge(judge, out, err);
  if (annotate_cmd->parsed()) return RunAnnotate(annotate, out, err);
  return kExitUsage;
}

}  // namespace arena::cli
