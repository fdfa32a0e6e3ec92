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

#include <cmath>
#include <random>

#include "arena/simulator.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace arena {
namespace {

using ::arena::testing::ReadAll;
using ::arena::testing::TestData;
using ::testing::HasSubstr;

SyntheticWorld TwoModels(double elo_a, double elo_b, uint64_t seed, double ties = 0.0) {
  return SyntheticWorld{
      .models = {{.id = MustParseModelId("sim/a"), .true_elo = elo_a},
                 {.id = MustParseModelId("sim/b"), .true_elo = elo_b}},
      .tie_probability = ties,
      .seed = seed};
}

// Share of decisive battles won by sim/a.
double WinShareOfA(const std::vector<BattleRecord>& battles) {
  int64_t wins = 0, decisive = 0;
  for (const BattleRecord& b : battles) {
    if (b.outcome == Outcome::kTie) continue;
    ++decisive;
    const bool a_first = b.model_a.canonical() == "sim/a";
    if ((b.outcome == Outcome::kWinA) == a_first) ++wins;
  }
  return static_cast<double>(wins) / decisive;
}

TEST(SynthesizeResponseTest, RoundTripsRandomTargets) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> small(0, 6);
  std::uniform_int_distribution<int> extra(0, 200);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 500; ++i) {
    StyleFeatures target{.lists_count = small(rng),
                         .headers_count = small(rng),
                         .emphasis_count = small(rng),
                         .has_gps_output = coin(rng)};
    target.response_length = std::max<int64_t>(1, MinimumLength(target)) + extra(rng);
    const std::string text = SynthesizeResponse(target);
    EXPECT_EQ(ExtractFeatures(text), target) << text;
  }
}

TEST(SynthesizeResponseTest, MinimalTargets) {
  EXPECT_EQ(MinimumLength({}), 0);
  EXPECT_EQ(MinimumLength({.lists_count = 1, .headers_count = 1, .emphasis_count = 1,
                           .has_gps_output = true}),
            7);
  const StyleFeatures one{.response_length = 1};
  EXPECT_EQ(ExtractFeatures(SynthesizeResponse(one)), one);
}

TEST(WinProbabilityTest, ClosedForm) {
  const StyleVector zero{};
  EXPECT_NEAR(WinProbability(1400, 1000, 400, zero, zero), 10.0 / 11.0, 1e-12);
  EXPECT_NEAR(WinProbability(1000, 1000, 400, zero, zero), 0.5, 1e-12);
  const StyleVector bias{0.5, 0, 0, 0, 0};
  const StyleVector diff{0.4, 0.9, 0, 0, 0};
  EXPECT_NEAR(WinProbability(1000, 1000, 400, bias, diff), 1.0 / (1.0 + std::exp(-0.2)), 1e-12);
}

TEST(SimulateTest, DeterministicInSeed) {
  const SyntheticWorld world = TwoModels(1100, 1000, 5, 0.1);
  EXPECT_EQ(Simulate(world, 300), Simulate(world, 300));
  EXPECT_NE(Simulate(world, 300), Simulate(TwoModels(1100, 1000, 6, 0.1), 300));
}

TEST(SimulateTest, RecordsAreWellFormed) {
  const SyntheticWorld world = TwoModels(1100, 1000, 5, 0.1);
  const Simulation sim = SimulateDetailed(world, 50);
  ASSERT_EQ(sim.battles.size(), 50u);
  ASSERT_EQ(sim.drawn.size(), 50u);
  EXPECT_EQ(sim.battles[0].battle_id, "sim-000001");
  EXPECT_EQ(sim.battles[49].battle_id, "sim-000050");
  for (std::size_t i = 0; i < sim.battles.size(); ++i) {
    const BattleRecord& b = sim.battles[i];
    EXPECT_TRUE(ValidateBattleRecord(b).ok());
    EXPECT_EQ(b.timestamp, world.start_time + absl::Seconds(static_cast<int64_t>(i)));
    EXPECT_EQ(ExtractFeatures(b.response_a), sim.drawn[i].first);
    EXPECT_EQ(ExtractFeatures(b.response_b), sim.drawn[i].second);
  }
}

TEST(SimulateTest, EqualRatingsSplitEvenly) {
  const double share = WinShareOfA(Simulate(TwoModels(1000, 1000, 21), 20000));
  EXPECT_GE(share, 0.47);
  EXPECT_LE(share, 0.53);
}

TEST(SimulateTest, FourHundredPointGapGivesTenToOne) {
  constexpr int kN = 10000;
  const double p = 10.0 / 11.0;
  const double share = WinShareOfA(Simulate(TwoModels(1400, 1000, 22), kN));
  EXPECT_NEAR(share, p, 3 * std::sqrt(p * (1 - p) / kN));
}

TEST(SimulateTest, TieRateMatches) {
  constexpr int kN = 10000;
  const auto battles = Simulate(TwoModels(1000, 1000, 23, 0.2), kN);
  const auto ties = std::count_if(battles.begin(), battles.end(),
                                  [](const BattleRecord& b) { return b.outcome == Outcome::kTie; });
  EXPECT_NEAR(static_cast<double>(ties) / kN, 0.2, 3 * std::sqrt(0.16 / kN));
}

TEST(WorldSpecTest, ParsesFixtures) {
  auto two = ParseWorldSpec(ReadAll(TestData("world_two_models.json")));
  ASSERT_TRUE(two.ok()) << two.status();
  EXPECT_EQ(two->models.size(), 2u);
  EXPECT_EQ(two->seed, 11u);
  EXPECT_DOUBLE_EQ(two->tie_probability, 0.1);
  EXPECT_DOUBLE_EQ(two->models[0].style.length_mean, 120.0);

  auto three = ParseWorldSpec(ReadAll(TestData("world_three_models.json")));
  ASSERT_TRUE(three.ok()) << three.status();
  EXPECT_DOUBLE_EQ(three->voter_style_bias[0], 0.5);
  EXPECT_DOUBLE_EQ(three->models[2].style.length_mean, 300.0);
  EXPECT_THAT(WorldSummary(*three), HasSubstr("sim/low"));
}

TEST(WorldSpecTest, BiasAsArray) {
  auto world = ParseWorldSpec(R"({"voter_style_bias": [0.1, 0.2, 0.3, 0.4, 0.5],
      "models": [{"id": "a/x", "true_elo": 1000}, {"id": "a/y", "true_elo": 900}]})");
  ASSERT_TRUE(world.ok()) << world.status();
  EXPECT_DOUBLE_EQ(world->voter_style_bias[4], 0.5);
}

struct BadSpec {
  std::string json;
  std::string field;
};

void PrintTo(const BadSpec& c, std::ostream* os) { *os << c.field; }

class WorldSpecErrorTest : public ::testing::TestWithParam<BadSpec> {};

TEST_P(WorldSpecErrorTest, NamesField) {
  auto world = ParseWorldSpec(GetParam().json);
  ASSERT_FALSE(world.ok());
  EXPECT_TRUE(absl::IsInvalidArgument(world.status()));
  EXPECT_THAT(std::string(world.status().message()), HasSubstr(GetParam().field));
}

constexpr char kTwo[] = R"({"id": "a/x", "true_elo": 1000}, {"id": "a/y", "true_elo": 900})";

INSTANTIATE_TEST_SUITE_P(
    Cases, WorldSpecErrorTest,
    ::testing::Values(
        BadSpec{"{}", "models"},
        BadSpec{R"({"models": [{"id": "a/x", "true_elo": 1000}]})", "models"},
        BadSpec{R"({"models": [{"id": "a/x"}, {"id": "a/x"}]})", "models[1].id"},
        BadSpec{R"({"models": [{"id": "nope"}, {"id": "a/y"}]})", "models[0].id"},
        BadSpec{std::string(R"({"tie_probability": 1.5, "models": [)") + kTwo + "]}",
                "tie_probability"},
        BadSpec{std::string(R"({"alpha": 0, "models": [)") + kTwo + "]}", "alpha"},
        BadSpec{std::string(R"({"voter_style_bias": {"colour": 1}, "models": [)") + kTwo + "]}",
                "voter_style_bias"},
        BadSpec{std::string(R"({"voter_style_bias": [1, 2], "models": [)") + kTwo + "]}",
                "voter_style_bias"},
        BadSpec{R"({"models": [{"id": "a/x", "style": {"length_sd": -1}}, {"id": "a/y"}]})",
                "models[0].style.length_sd"},
        BadSpec{R"({"models": [{"id": "a/x", "style": {"gps_probability": 2}}, {"id": "a/y"}]})",
                "models[0].style.gps_probability"},
        BadSpec{"[1, 2", "JSON"}),
    [](const auto& info) { return testing::ParamName(info.param.field, info.index); });

TEST(RecoveryTest, StyleFitRecoversBiasOnFixtureWorld) {
  auto world = ParseWorldSpec(ReadAll(TestData("world_three_models.json")));
  ASSERT_TRUE(world.ok());
  BTConfig config;
  config.anchor_model = MustParseModelId("sim/mid");
  auto report = RunRecovery(*world, 5000, config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_DOUBLE_EQ(report->truth.at(MustParseModelId("sim/mid")), 1000.0);
  EXPECT_DOUBLE_EQ(report->truth.at(MustParseModelId("sim/top")), 1200.0);
  ASSERT_TRUE(report->beta.has_value());
  // One 5000-battle world estimates beta_length with an sd near 0.075.
  EXPECT_NEAR((*report->beta)[0], 0.5, 0.25);
  EXPECT_LT(*report->style_mean_abs_error, report->plain_mean_abs_error);
}

TEST(RecoveryTest, NoStyleFitWithoutBias) {
  BTConfig config;
  auto report = RunRecovery(TwoModels(1200, 1000, 8), 3000, config);
  ASSERT_TRUE(report.ok());
  EXPECT_FALSE(report->style.has_value());
  EXPECT_NEAR(report->truth.at(MustParseModelId("sim/a")), 1100.0, 1e-9);
  EXPECT_LT(report->plain_max_error, 30.0);
}

}  // namespace
}  // namespace arena
