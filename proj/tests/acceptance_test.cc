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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion, non-zero exit when
// any criterion fails. The data-dependent criterion runs only when a released
// battle log is given as the first argument or in ARENA_RELEASED_LOG.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <thread>

#include "arena/analysis.h"
#include "arena/arena_service.h"
#include "arena/battle_log.h"
#include "arena/bootstrap.h"
#include "arena/bradley_terry.h"
#include "arena/elo.h"
#include "arena/format.h"
#include "arena/http_api.h"
#include "arena/leaderboard.h"
#include "arena/registry.h"
#include "arena/simulator.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

namespace arena {
namespace {

using ::arena::testing::FreshDir;
using ::arena::testing::MakeBattle;
using ::arena::testing::ModelNames;
using ::arena::testing::RandomBattles;
using ::arena::testing::TestData;

enum class Verdict { kPass, kFail, kSkip };

struct Result {
  Verdict verdict;
  std::string detail;
};

Result Check(bool ok, std::string detail) {
  return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)};
}

Result Fail(std::string detail) { return {Verdict::kFail, std::move(detail)}; }

std::vector<BattleRecord> LoadFixture(std::string_view name) {
  auto read = ReadBattles(TestData(name));
  return read.ok() ? read->records : std::vector<BattleRecord>{};
}

// ------------------------------------------------------------------------

Result EloClosedForm() {
  const double expected = EloExpected(1200, 800, 400);
  const auto [a, b] = EloUpdate(1000, 1000, 1.0, EloConfig{.k_factor = 32});
  const bool ok = std::abs(expected - 10.0 / 11.0) <= 1e-12 && a == 1016.0 && b == 984.0;
  return Check(ok, fmt::format("E = {:.15f}, update -> ({}, {})", expected, a, b));
}

Result TwoModelOracle() {
  const auto battles = LoadFixture("two_models_3_1.jsonl");
  BTConfig config;
  config.anchor_model = MustParseModelId("lab/beta");
  auto fit = FitBradleyTerry(battles, config);
  if (!fit.ok()) return Fail(std::string(fit.status().message()));
  const double gap = fit->ratings.at(MustParseModelId("lab/alpha")).elo -
                     fit->ratings.at(MustParseModelId("lab/beta")).elo;
  return Check(std::abs(gap - 190.849) <= 1e-3, fmt::format("gap = {:.6f}", gap));
}

Result OrderInvariance() {
  const auto names = ModelNames(5);
  auto battles = RandomBattles(names, {1100, 1050, 1000, 950, 900}, 500, 41, 0.1);
  BTConfig config;
  auto base = FitBradleyTerry(battles, config);
  if (!base.ok()) return Fail(std::string(base.status().message()));
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int p = 0; p < 20; ++p) {
    std::shuffle(battles.begin(), battles.end(), rng);
    auto fit = FitBradleyTerry(battles, config);
    if (!fit.ok()) return Fail(std::string(fit.status().message()));
    for (const auto& [id, r] : base->ratings) {
      worst = std::max(worst, std::abs(fit->ratings.at(id).elo - r.elo));
    }
  }

  // Online Elo on a four-battle log: every ordering of the same battles.
  std::vector<BattleRecord> small = {
      MakeBattle("e1", "lab/a", "lab/b", Outcome::kWinA),
      MakeBattle("e2", "lab/a", "lab/b", Outcome::kWinA),
      MakeBattle("e3", "lab/a", "lab/b", Outcome::kWinB),
      MakeBattle("e4", "lab/b", "lab/c", Outcome::kWinA)};
  std::vector<int> order = {0, 1, 2, 3};
  std::vector<std::map<ModelId, double>> runs;
  do {
    std::vector<BattleRecord> permuted;
    for (int i : order) permuted.push_back(small[i]);
    runs.push_back(EloRun(permuted, EloConfig{}));
  } while (std::next_permutation(order.begin(), order.end()));
  double elo_spread = 0.0;
  for (const auto& r1 : runs) {
    for (const auto& r2 : runs) {
      for (const auto& [id, v] : r1) elo_spread = std::max(elo_spread, std::abs(v - r2.at(id)));
    }
  }
  return Check(worst <= 1e-9 && elo_spread > 1.0,
               fmt::format("BT max drift {:.2e} over 20 permutations; Elo spread {:.2f} points",
                           worst, elo_spread));
}

Result AnchorContract() {
  const auto battles = LoadFixture("three_models.jsonl");
  BTConfig config;
  config.anchor_model = MustParseModelId("lab/alpha");
  auto board = ComputeLeaderboard(battles, config, LeaderboardOptions{.rounds = 100, .seed = 5});
  if (!board.ok()) return Fail(std::string(board.status().message()));
  for (const LeaderboardEntry& e : board->entries) {
    if (e.model != *config.anchor_model) continue;
    const bool ok = e.elo == 1000.0 && e.ci_lower == 1000.0 && e.ci_upper == 1000.0;
    return Check(ok, fmt::format("anchor elo {} CI [{}, {}]", *e.elo, *e.ci_lower, *e.ci_upper));
  }
  return Fail("anchor missing from leaderboard");
}

SyntheticWorld ThreeModelWorld(uint64_t seed) {
  return SyntheticWorld{.models = {{.id = MustParseModelId("sim/high"), .true_elo = 1200},
                                   {.id = MustParseModelId("sim/mid"), .true_elo = 1000},
                                   {.id = MustParseModelId("sim/low"), .true_elo = 800}},
                        .seed = seed};
}

Result SyntheticRecovery() {
  BTConfig config;
  config.anchor_model = MustParseModelId("sim/mid");
  std::map<ModelId, double> total_error;
  bool ordered = true;
  constexpr int kSeeds = 5;
  for (int s = 1; s <= kSeeds; ++s) {
    auto report = RunRecovery(ThreeModelWorld(s), 10000, config);
    if (!report.ok()) return Fail(std::string(report.status().message()));
    const auto& r = report->plain;
    ordered = ordered && r.at(MustParseModelId("sim/high")) > r.at(MustParseModelId("sim/mid")) &&
              r.at(MustParseModelId("sim/mid")) > r.at(MustParseModelId("sim/low"));
    for (const auto& [id, truth] : report->truth) {
      total_error[id] += std::abs(r.at(id) - truth);
    }
  }
  double worst = 0.0;
  for (const auto& [id, e] : total_error) worst = std::max(worst, e / kSeeds);
  return Check(ordered && worst <= 30.0,
               fmt::format("worst mean abs error {:.2f} over {} seeds, ordering {}", worst,
                           kSeeds, ordered ? "correct" : "WRONG"));
}

Result BootstrapCoverage() {
  const ModelId anchor = MustParseModelId("sim/anchor");
  const ModelId other = MustParseModelId("sim/other");
  BTConfig config;
  config.anchor_model = anchor;
  int covered = 0;
  constexpr int kWorlds = 100;
  for (int w = 0; w < kWorlds; ++w) {
    const SyntheticWorld world{.models = {{.id = anchor, .true_elo = 1000},
                                          {.id = other, .true_elo = 1200}},
                               .seed = 1000 + static_cast<uint64_t>(w)};
    const auto battles = Simulate(world, 400);
    auto boot = BootstrapConfidenceIntervals(
        battles, config,
        BootstrapOptions{.rounds = 200, .seed = static_cast<uint64_t>(w), .threads = 2});
    if (!boot.ok()) return Fail(std::string(boot.status().message()));
    const BootstrapInterval& ci = boot->intervals.at(other);
    if (ci.lower <= 1200.0 && 1200.0 <= ci.upper) ++covered;
  }
  return Check(covered >= 88, fmt::format("{} of {} intervals cover the truth", covered, kWorlds));
}

StyleProfile Profile(double length, double lists, double headers, double emphasis, double gps,
                     double length_spread = 0.35) {
  return StyleProfile{.length_mean = length,
                      .length_sd = length * length_spread,
                      .lists_mean = lists,
                      .headers_mean = headers,
                      .emphasis_mean = emphasis,
                      .gps_probability = gps};
}

Result StyleCorrection() {
  // Longer-writing models are weaker, so length bias inflates the weak ones.
  // A single 5000-battle world pins beta_length only to about +-0.075 (one
  // sd), so the estimate is averaged over independent worlds of that size.
  constexpr int kWorlds = 5;
  double beta_sum = 0.0;
  double style_mae = 0.0, plain_mae = 0.0;
  bool mae_ok = true;
  for (int w = 1; w <= kWorlds; ++w) {
    SyntheticWorld biased{
        .models = {{.id = MustParseModelId("sim/top"), .true_elo = 1200,
                    .style = Profile(60, 2, 0.5, 1, 0.3, 0.8)},
                   {.id = MustParseModelId("sim/mid"), .true_elo = 1000,
                    .style = Profile(150, 2, 0.5, 1, 0.3, 0.8)},
                   {.id = MustParseModelId("sim/low"), .true_elo = 800,
                    .style = Profile(300, 2, 0.5, 1, 0.3, 0.8)}},
        .voter_style_bias = {0.5, 0, 0, 0, 0},
        .seed = static_cast<uint64_t>(w)};
    BTConfig config;
    config.anchor_model = MustParseModelId("sim/mid");
    auto report = RunRecovery(biased, 5000, config);
    if (!report.ok()) return Fail(std::string(report.status().message()));
    beta_sum += (*report->beta)[0];
    style_mae += *report->style_mean_abs_error / kWorlds;
    plain_mae += report->plain_mean_abs_error / kWorlds;
    mae_ok = mae_ok && *report->style_mean_abs_error < report->plain_mean_abs_error;
  }
  const double beta_length = beta_sum / kWorlds;
  const bool length_ok = std::abs(beta_length - 0.5) <= 0.1;

  // A world whose voters weigh style like the reference deployment.
  const StyleVector signs_bias = {0.526, 0.095, -0.153, -0.117, 0.06};
  SyntheticWorld mimic{
      .models = {{.id = MustParseModelId("sim/p"), .true_elo = 1100,
                  .style = Profile(180, 3, 1.5, 2, 0.5)},
                 {.id = MustParseModelId("sim/q"), .true_elo = 1050,
                  .style = Profile(120, 2, 1, 1.5, 0.4)},
                 {.id = MustParseModelId("sim/r"), .true_elo = 1000,
                  .style = Profile(90, 1.5, 2, 3, 0.6)},
                 {.id = MustParseModelId("sim/s"), .true_elo = 950,
                  .style = Profile(220, 4, 0.5, 1, 0.3)}},
      .voter_style_bias = signs_bias,
      .tie_probability = 0.1,
      .seed = 29};
  auto signs = RunRecovery(mimic, 50000, BTConfig{});
  if (!signs.ok()) return Fail(std::string(signs.status().message()));
  bool signs_ok = true;
  std::string recovered;
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    const double b = (*signs->beta)[k];
    signs_ok = signs_ok && (b > 0) == (signs_bias[k] > 0) && b != 0.0;
    recovered += fmt::format("{}{:+.3f}", k ? " " : "", b);
  }
  return Check(length_ok && mae_ok && signs_ok,
               fmt::format("mean beta_length {:.3f} over {} worlds; MAE style {:.2f} vs plain "
                           "{:.2f} (lower in {}); signs [{}]",
                           beta_length, kWorlds, style_mae, plain_mae,
                           mae_ok ? "every world" : "NOT every world", recovered));
}

Result GradientCheck() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.0, 3.0);
  std::vector<ComparisonRow> rows;
  for (int r = 0; r < 60; ++r) {
    ComparisonRow row{.first = pick(rng), .second = pick(rng)};
    if (row.first == row.second) row.second = (row.first + 1) % 6;
    row.forward = weight(rng);
    row.backward = weight(rng);
    for (double& f : row.features) f = unit(rng);
    rows.push_back(row);
  }
  const BtObjective objective(6, rows, kNumStyleFeatures, 0.1);
  double worst = 0.0;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> params(objective.num_params());
    for (double& p : params) p = 2.0 * unit(rng);
    const std::vector<double> analytic = objective.Gradient(params);
    double diff2 = 0.0, norm2 = 0.0;
    for (int i = 0; i < objective.num_params(); ++i) {
      const double h = 1e-5;
      std::vector<double> up = params, down = params;
      up[i] += h;
      down[i] -= h;
      const double numeric =
          (objective.LogLikelihood(up) - objective.LogLikelihood(down)) / (2 * h);
      diff2 += (analytic[i] - numeric) * (analytic[i] - numeric);
      norm2 += analytic[i] * analytic[i];
    }
    worst = std::max(worst, std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-12));
  }
  return Check(worst <= 1e-4, fmt::format("worst relative error {:.2e} over 10 points", worst));
}

Result PairwiseIdentities() {
  const auto names = ModelNames(5);
  const auto battles = RandomBattles(names, {1100, 1000, 1000, 950, 900}, 200, 13, 0.15);
  const PairwiseMatrix m = ComputePairwiseMatrix(battles);
  const std::size_t n = m.models.size();
  bool ok = n == names.size();
  for (std::size_t i = 0; ok && i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Independent recount straight from the records.
      int64_t count = 0, wins_ij = 0, wins_ji = 0;
      for (const BattleRecord& b : battles) {
        const bool ij = b.model_a == m.models[i] && b.model_b == m.models[j];
        const bool ji = b.model_a == m.models[j] && b.model_b == m.models[i];
        if (!ij && !ji) continue;
        ++count;
        if (b.outcome == Outcome::kTie) continue;
        const bool a_won = b.outcome == Outcome::kWinA;
        if (a_won == ij) ++wins_ij; else ++wins_ji;
      }
      if (i == j) count = wins_ij = wins_ji = 0;
      ok = ok && m.battle_count[i][j] == count && m.battle_count[i][j] == m.battle_count[j][i] &&
           m.wins[i][j] == wins_ij && m.wins[j][i] == wins_ji;
      if (i != j && wins_ij + wins_ji > 0) {
        const double expected = static_cast<double>(wins_ij) / (wins_ij + wins_ji);
        ok = ok && m.win_rate[i][j] && m.win_rate[j][i] &&
             std::abs(*m.win_rate[i][j] - expected) < 1e-12 &&
             std::abs(*m.win_rate[i][j] + *m.win_rate[j][i] - 1.0) < 1e-12;
      } else {
        ok = ok && !m.win_rate[i][j];
      }
    }
  }
  return Check(ok, fmt::format("{} models, 200 battles recounted", n));
}

Result EndToEndService() {
  const auto dir = FreshDir("acceptance");
  auto mock = std::make_shared<MockProvider>(3);
  auto router = std::make_shared<ProviderRouter>(DefaultRegistry());
  router->Route("*", mock, 8);
  auto log = std::shared_ptr<BattleLog>(*BattleLog::Open(dir / "battles.jsonl"));
  ServiceOptions options;
  options.battles_per_hour = 0;
  ArenaService service(options, router, log, std::make_shared<ImageStore>(dir / "images"));
  HttpApi api(service, HttpApiOptions{.worker_threads = 8});
  auto port = api.Bind("127.0.0.1", 0);
  if (!port.ok()) return Fail(std::string(port.status().message()));
  std::thread server([&] { (void)api.Serve(); });
  while (!api.running()) std::this_thread::sleep_for(std::chrono::milliseconds(2));

  httplib::Client client("127.0.0.1", *port);
  const httplib::MultipartFormDataItems items = {
      {"image", std::string(PlaceholderPng()), "p.png", "image/png"}};
  const ModelRegistry registry = DefaultRegistry();
  int leaks = 0;
  bool mapping_ok = true;
  std::vector<std::string> ids;
  for (int i = 0; i < 30; ++i) {
    auto created = client.Post("/api/battles", items);
    if (!created || created->status != 201) {
      mapping_ok = false;
      break;
    }
    for (const RegistryEntry& e : registry.entries()) {
      if (created->body.find(e.id.canonical()) != std::string::npos ||
          created->body.find(e.display_name) != std::string::npos) {
        ++leaks;
      }
    }
    ids.push_back(nlohmann::json::parse(created->body)["battle_id"]);
  }

  // Sequential votes: left, right, tie in turn, checked against the log.
  const char* choices[] = {"left", "right", "tie"};
  for (std::size_t i = 0; mapping_ok && i + 1 < ids.size(); ++i) {
    const BattleSession s = *service.FindSession(ids[i]);
    auto voted = client.Post("/api/battles/" + ids[i] + "/vote",
                             nlohmann::json{{"choice", choices[i % 3]}}.dump(), "application/json");
    if (!voted || voted->status != 200) {
      mapping_ok = false;
      break;
    }
    const BattleRecord logged = (*log->Read()).records.back();
    const Outcome expected = OutcomeForVote(*VoteChoiceFromName(choices[i % 3]), s.left_is_a);
    const auto reveal = nlohmann::json::parse(voted->body);
    mapping_ok = logged.battle_id == ids[i] && logged.outcome == expected &&
                 logged.model_a == s.model_a && logged.model_b == s.model_b &&
                 reveal["model_left"] == (s.left_is_a ? s.model_a : s.model_b).canonical();
  }
  const std::size_t before_race = log->size();

  // Eight concurrent votes on the last battle.
  std::atomic<int> accepted{0}, conflicts{0};
  std::vector<std::thread> voters;
  for (int t = 0; t < 8; ++t) {
    voters.emplace_back([&, t] {
      httplib::Client c("127.0.0.1", *port);
      auto r = c.Post("/api/battles/" + ids.back() + "/vote",
                      nlohmann::json{{"choice", choices[t % 3]}}.dump(), "application/json");
      if (r && r->status == 200) ++accepted;
      if (r && r->status == 409) ++conflicts;
    });
  }
  for (auto& v : voters) v.join();
  api.Stop();
  server.join();
  const std::size_t race_records = log->size() - before_race;
  const bool ok = leaks == 0 && mapping_ok && before_race == ids.size() - 1 &&
                  accepted == 1 && conflicts == 7 && race_records == 1;
  return Check(ok, fmt::format("{} battles, {} leaked names, mapping {}, race: {} accepted / {} "
                               "conflicts / {} record",
                               ids.size(), leaks, mapping_ok ? "ok" : "WRONG", accepted.load(),
                               conflicts.load(), race_records));
}

Result ReleasedLog(const std::string& path) {
  if (path.empty()) {
    return {Verdict::kSkip, "no released battle log supplied (argument or ARENA_RELEASED_LOG)"};
  }
  auto read = ReadBattles(path);
  if (!read.ok()) return Fail(std::string(read.status().message()));
  BTConfig config;
  config.anchor_model = MustParseModelId("openai/gpt-4o");
  auto fit = FitBradleyTerry(read->records, config);
  if (!fit.ok()) return Fail(std::string(fit.status().message()));
  const auto find = [&](std::string_view id) -> std::optional<double> {
    auto it = fit->ratings.find(MustParseModelId(id));
    return it == fit->ratings.end() ? std::nullopt : std::optional(it->second.elo);
  };
  const auto pro = find("google/gemini-2.5-pro");
  const auto flash = find("google/gemini-2.5-flash");
  if (!pro || !flash) return Fail("log lacks the gemini-2.5 models");
  double top = -1e300;
  for (const auto& [id, r] : fit->ratings) top = std::max(top, r.elo);
  const bool board_ok = *pro == top && *pro > *flash && std::abs(*pro - 1319.7) <= 15 &&
                        std::abs(*flash - 1206.5) <= 15;

  auto style = FitBradleyTerryStyle(read->records, BattleStyleDifferences(read->records), config);
  if (!style.ok()) return Fail(std::string(style.status().message()));
  const StyleVector reference = {0.526, 0.095, -0.153, -0.117, 0.06};
  double worst = 0.0;
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    worst = std::max(worst, std::abs((*style->style_coefficients)[k] - reference[k]));
  }
  return Check(board_ok && worst <= 0.05,
               fmt::format("pro {:.1f}, flash {:.1f}; worst style deviation {:.3f}", *pro,
                           *flash, worst));
}

}  // namespace
}  // namespace arena

int main(int argc, char** argv) {
  using arena::Result;
  using arena::Verdict;
  std::string released;
  if (argc > 1) {
    released = argv[1];
  } else if (const char* env = std::getenv("ARENA_RELEASED_LOG")) {
    released = env;
  }
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"elo-closed-form", arena::EloClosedForm},
      {"two-model-bt-oracle", arena::TwoModelOracle},
      {"order-invariance", arena::OrderInvariance},
      {"anchor-contract", arena::AnchorContract},
      {"synthetic-recovery", arena::SyntheticRecovery},
      {"bootstrap-coverage", arena::BootstrapCoverage},
      {"style-confounder-correction", arena::StyleCorrection},
      {"gradient-check", arena::GradientCheck},
      {"pairwise-identities", arena::PairwiseIdentities},
      {"end-to-end-service", arena::EndToEndService},
      {"released-log-reproduction", [&] { return arena::ReleasedLog(released); }},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Result result = run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = result.verdict == Verdict::kPass   ? "PASS"
                      : result.verdict == Verdict::kSkip ? "SKIP"
                                                         : "FAIL";
    if (result.verdict == Verdict::kFail) ++failures;
    std::cout << tag << " " << name << " (" << fmt::format("{:.2f}s", seconds)
              << "): " << result.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} failed", failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
