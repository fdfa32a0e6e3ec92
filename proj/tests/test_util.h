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

#ifndef ARENA_TESTS_TEST_UTIL_H_
#define ARENA_TESTS_TEST_UTIL_H_

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "absl/time/time.h"
#include "arena/image_store.h"
#include "arena/model.h"
#include "gtest/gtest.h"

namespace arena::testing {

inline std::string TestData(std::string_view name) {
  return std::string(ARENA_TESTDATA_DIR) + "/" + std::string(name);
}

// Fresh empty directory under the gtest temp root.
inline std::filesystem::path FreshDir(std::string_view tag) {
  static int counter = 0;
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) /
      (std::string("arena_") + (info ? info->name() : "x") + "_" +
       std::string(tag) + "_" + std::to_string(::getpid()) + "_" +
       std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Stable gtest parameter name: `label` with non-alphanumerics mapped to '_',
// suffixed by the case index to keep names unique.
inline std::string ParamName(std::string_view label, std::size_t index) {
  std::string out;
  for (char c : label) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return out + "_" + std::to_string(index);
}

inline std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline BattleRecord MakeBattle(std::string id, std::string_view a,
                               std::string_view b, Outcome outcome,
                               std::string response_a = "Paris, France.",
                               std::string response_b = "Lyon, France.") {
  return BattleRecord{.battle_id = std::move(id),
                      .timestamp = absl::FromUnixSeconds(1756684800),
                      .model_a = MustParseModelId(a),
                      .model_b = MustParseModelId(b),
                      .prompt = "Where was this photo taken?",
                      .image_ref = PlaceholderImageRef(),
                      .response_a = std::move(response_a),
                      .response_b = std::move(response_b),
                      .outcome = outcome};
}

inline std::vector<std::string> ModelNames(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("test/m" + std::to_string(i));
  return out;
}

// Battles between uniformly drawn pairs, decided by the base-10 logistic law
// on `elos` with the given tie rate. Independent of the simulator module.
inline std::vector<BattleRecord> RandomBattles(const std::vector<std::string>& names,
                                               const std::vector<double>& elos,
                                               int n, uint64_t seed,
                                               double tie_rate = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(names.size()) - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BattleRecord> out;
  for (int k = 0; k < n; ++k) {
    int i = pick(rng);
    int j = pick(rng);
    while (j == i) j = pick(rng);
    Outcome o = Outcome::kTie;
    if (unit(rng) >= tie_rate) {
      const double p = 1.0 / (1.0 + std::pow(10.0, (elos[j] - elos[i]) / 400.0));
      o = unit(rng) < p ? Outcome::kWinA : Outcome::kWinB;
    }
    out.push_back(MakeBattle("rb-" + std::to_string(k), names[i], names[j], o));
  }
  return out;
}

// Minorization-maximization fit of Bradley-Terry strengths (ties count half
// to each side). Returns Elo values anchored so `anchor` sits at 1000.
inline std::map<std::string, double> MmOracle(const std::vector<BattleRecord>& battles,
                                              const std::string& anchor,
                                              int iterations = 20000) {
  std::map<std::string, int> index;
  for (const BattleRecord& b : battles) {
    index.emplace(b.model_a.canonical(), 0);
    index.emplace(b.model_b.canonical(), 0);
  }
  int n = 0;
  for (auto& [name, i] : index) i = n++;
  std::vector<double> wins(n, 0.0);
  std::vector<std::vector<double>> games(n, std::vector<double>(n, 0.0));
  for (const BattleRecord& b : battles) {
    const int i = index[b.model_a.canonical()];
    const int j = index[b.model_b.canonical()];
    const double s = b.outcome == Outcome::kWinA ? 1.0 : b.outcome == Outcome::kWinB ? 0.0 : 0.5;
    wins[i] += s;
    wins[j] += 1.0 - s;
    games[i][j] += 1.0;
    games[j][i] += 1.0;
  }
  std::vector<double> p(n, 1.0);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
      double denom = 0.0;
      for (int j = 0; j < n; ++j) {
        if (games[i][j] > 0) denom += games[i][j] / (p[i] + p[j]);
      }
      next[i] = wins[i] / denom;
    }
    double total = 0.0;
    for (double v : next) total += v;
    for (int i = 0; i < n; ++i) p[i] = next[i] * n / total;
  }
  std::map<std::string, double> out;
  const double ref = p[index.at(anchor)];
  for (const auto& [name, i] : index) out[name] = 400.0 * std::log10(p[i] / ref) + 1000.0;
  return out;
}

}  // namespace arena::testing

#endif  // ARENA_TESTS_TEST_UTIL_H_
