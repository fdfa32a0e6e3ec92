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

#include "arena/bootstrap.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <random>
#include <thread>

#include "arena/format.h"
#include "bt_internal.h"

namespace arena {

double Quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  if (values.empty()) return std::nan("");
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

absl::StatusOr<BootstrapResult> BootstrapConfidenceIntervals(
    std::span<const BattleRecord> battles, const BTConfig& config,
    const BootstrapOptions& options, std::span<const StyleVector> features) {
  if (absl::Status s = ValidateBTConfig(config); !s.ok()) return s;
  if (battles.empty()) {
    return absl::InvalidArgumentError("bootstrap needs at least one battle");
  }
  if (options.rounds <= 0) {
    return absl::InvalidArgumentError("rounds must be positive");
  }
  if (!(options.confidence > 0 && options.confidence < 1)) {
    return absl::InvalidArgumentError("confidence must lie in (0, 1)");
  }
  if (!features.empty() && features.size() != battles.size()) {
    return absl::InvalidArgumentError("features not aligned with battles");
  }

  const internal::IndexedBattles indexed = internal::IndexBattles(battles);
  const std::size_t n = indexed.size();
  const int rounds = options.rounds;
  std::vector<std::optional<BTFitResult>> fits(rounds);

  const auto run_round = [&](int r) {
    std::seed_seq seq{static_cast<uint32_t>(options.seed & 0xffffffffu),
                      static_cast<uint32_t>(options.seed >> 32),
                      static_cast<uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<int> multiplicity(n, 0);
    for (std::size_t k = 0; k < n; ++k) ++multiplicity[pick(rng)];
    fits[r] = internal::FitIndexed(indexed, multiplicity, features, config);
  };

  const int workers = std::clamp(options.threads, 1, rounds);
  if (workers == 1) {
    for (int r = 0; r < rounds; ++r) run_round(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < rounds; r = next++) run_round(r);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::map<ModelId, std::vector<double>> samples;
  int unconverged = 0;
  for (const auto& fit : fits) {
    if (!fit->converged) ++unconverged;
    for (const auto& [model, rating] : fit->ratings) {
      samples[model].push_back(rating.elo);
    }
  }

  BootstrapResult result;
  result.rounds = rounds;
  const double tail = (1.0 - options.confidence) / 2.0;
  for (auto& [model, values] : samples) {
    BootstrapInterval interval;
    interval.appearances = static_cast<int>(values.size());
    interval.lower = Quantile(values, tail);
    interval.upper = Quantile(values, 1.0 - tail);
    if (interval.appearances < rounds) {
      result.warnings.push_back(fmt::format("{} rated in only {} of {} resamples", model.canonical(), interval.appearances, rounds));
    }
    result.intervals.emplace(model, interval);
  }
  if (unconverged > 0) {
    result.warnings.push_back(
        fmt::format("{} of {} refits did not converge", unconverged, rounds));
  }
  return result;
}

}  // namespace arena
