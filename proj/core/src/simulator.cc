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

#include "arena/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "arena/format.h"
#include "arena/image_store.h"
#include "arena/providers.h"
#include "json_codec.h"

namespace arena {
namespace {

using internal::Json;

constexpr std::array<std::string_view, 9> kFiller = {
    "the", "scene", "shows", "a", "street", "with", "trees", "and", "houses"};

StyleFeatures DrawFeatures(const StyleProfile& p, std::mt19937_64& rng) {
  StyleFeatures f;
  auto poisson = [&rng](double mean) -> int64_t {
    if (mean <= 0) return 0;
    return std::poisson_distribution<int64_t>(mean)(rng);
  };
  f.lists_count = poisson(p.lists_mean);
  f.headers_count = poisson(p.headers_mean);
  f.emphasis_count = poisson(p.emphasis_mean);
  f.has_gps_output = std::bernoulli_distribution(p.gps_probability)(rng);
  const double raw =
      p.length_sd > 0 ? std::normal_distribution<double>(p.length_mean, p.length_sd)(rng)
                      : p.length_mean;
  f.response_length = std::max<int64_t>(
      {std::llround(raw), MinimumLength(f), int64_t{1}});
  return f;
}

absl::Status FieldError(std::string_view field, std::string_view message) {
  return absl::InvalidArgumentError(fmt::format("{}: {}", field, message));
}

}  // namespace

absl::Status ValidateWorld(const SyntheticWorld& world) {
  if (world.models.size() < 2) return FieldError("models", "need at least 2 models");
  std::set<ModelId> seen;
  for (std::size_t i = 0; i < world.models.size(); ++i) {
    const SimulatedModel& m = world.models[i];
    const std::string where = fmt::format("models[{}]", i);
    if (!seen.insert(m.id).second) {
      return FieldError(where + ".id", fmt::format("duplicate model {}", m.id.canonical()));
    }
    if (!std::isfinite(m.true_elo)) return FieldError(where + ".true_elo", "must be finite");
    const StyleProfile& s = m.style;
    if (!(s.length_mean >= 0)) return FieldError(where + ".style.length_mean", "must be >= 0");
    if (!(s.length_sd >= 0)) return FieldError(where + ".style.length_sd", "must be >= 0");
    if (!(s.lists_mean >= 0)) return FieldError(where + ".style.lists_mean", "must be >= 0");
    if (!(s.headers_mean >= 0)) return FieldError(where + ".style.headers_mean", "must be >= 0");
    if (!(s.emphasis_mean >= 0)) {
      return FieldError(where + ".style.emphasis_mean", "must be >= 0");
    }
    if (!(s.gps_probability >= 0 && s.gps_probability <= 1)) {
      return FieldError(where + ".style.gps_probability", "must be in [0, 1]");
    }
  }
  if (!(world.tie_probability >= 0 && world.tie_probability < 1)) {
    return FieldError("tie_probability", "must be in [0, 1)");
  }
  if (!(world.alpha > 0)) return FieldError("alpha", "must be positive");
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    if (!std::isfinite(world.voter_style_bias[k])) {
      return FieldError(fmt::format("voter_style_bias.{}", kStyleFeatureNames[k]),
                        "must be finite");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SyntheticWorld> ParseWorldSpec(std::string_view json) {
  auto parsed = internal::ParseJson(json);
  if (!parsed.ok() || !parsed->is_object()) {
    return absl::InvalidArgumentError("world spec must be a JSON object");
  }
  const Json& root = *parsed;
  SyntheticWorld world;
  auto number = [](const Json& obj, std::string_view key, std::string_view where,
                   double& out) -> absl::Status {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return absl::OkStatus();
    if (!it->is_number()) return FieldError(fmt::format("{}{}", where, key), "must be a number");
    out = it->get<double>();
    return absl::OkStatus();
  };
  if (auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_unsigned()) return FieldError("seed", "must be a non-negative integer");
    world.seed = it->get<uint64_t>();
  }
  if (auto s = number(root, "alpha", "", world.alpha); !s.ok()) return s;
  if (auto s = number(root, "tie_probability", "", world.tie_probability); !s.ok()) {
    return s;
  }
  if (auto it = root.find("start_time"); it != root.end()) {
    if (!it->is_string()) return FieldError("start_time", "must be an RFC 3339 string");
    auto t = ParseTimestamp(it->get<std::string>());
    if (!t.ok()) return FieldError("start_time", "must be an RFC 3339 string");
    world.start_time = *t;
  }
  if (auto it = root.find("voter_style_bias"); it != root.end() && !it->is_null()) {
    if (it->is_array()) {
      if (it->size() != kNumStyleFeatures) {
        return FieldError("voter_style_bias", "must have 5 entries");
      }
      for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
        if (!(*it)[k].is_number()) {
          return FieldError(fmt::format("voter_style_bias[{}]", k), "must be a number");
        }
        world.voter_style_bias[k] = (*it)[k].get<double>();
      }
    } else if (it->is_object()) {
      for (const auto& [key, value] : it->items()) {
        auto name = std::find(kStyleFeatureNames.begin(), kStyleFeatureNames.end(), key);
        if (name == kStyleFeatureNames.end()) {
          return FieldError(fmt::format("voter_style_bias.{}", key), "unknown feature");
        }
        if (!value.is_number()) {
          return FieldError(fmt::format("voter_style_bias.{}", key), "must be a number");
        }
        world.voter_style_bias[name - kStyleFeatureNames.begin()] = value.get<double>();
      }
    } else {
      return FieldError("voter_style_bias", "must be an object or array");
    }
  }
  auto models = root.find("models");
  if (models == root.end() || !models->is_array()) {
    return FieldError("models", "must be an array");
  }
  for (std::size_t i = 0; i < models->size(); ++i) {
    const Json& m = (*models)[i];
    const std::string where = fmt::format("models[{}].", i);
    if (!m.is_object()) return FieldError(fmt::format("models[{}]", i), "must be an object");
    auto id = internal::GetModelId(m, "id");
    if (!id.ok()) return FieldError(where + "id", std::string(id.status().message()));
    SimulatedModel model{*id};
    if (auto s = number(m, "true_elo", where, model.true_elo); !s.ok()) return s;
    if (auto st = m.find("style"); st != m.end() && !st->is_null()) {
      if (!st->is_object()) return FieldError(where + "style", "must be an object");
      const std::string sw = where + "style.";
      StyleProfile& p = model.style;
      for (auto [key, out] : {std::pair<std::string_view, double*>{"length_mean", &p.length_mean},
                              {"length_sd", &p.length_sd},
                              {"lists_mean", &p.lists_mean},
                              {"headers_mean", &p.headers_mean},
                              {"emphasis_mean", &p.emphasis_mean},
                              {"gps_probability", &p.gps_probability}}) {
        if (auto s = number(*st, key, sw, *out); !s.ok()) return s;
      }
    }
    world.models.push_back(std::move(model));
  }
  if (absl::Status s = ValidateWorld(world); !s.ok()) return s;
  return world;
}

int64_t MinimumLength(const StyleFeatures& t) {
  return 2 * t.lists_count + 2 * t.headers_count + t.emphasis_count +
         (t.has_gps_output ? 2 : 0);
}

std::string SynthesizeResponse(const StyleFeatures& t) {
  std::vector<std::string> lines;
  for (int64_t i = 0; i < t.headers_count; ++i) lines.push_back("## Location");
  std::string body;
  const int64_t filler = t.response_length - MinimumLength(t);
  for (int64_t i = 0; i < filler; ++i) {
    if (!body.empty()) body += ' ';
    body += kFiller[static_cast<std::size_t>(i) % kFiller.size()];
  }
  for (int64_t i = 0; i < t.emphasis_count; ++i) {
    if (!body.empty()) body += ' ';
    body += "**clue**";
  }
  if (!body.empty()) lines.push_back(std::move(body));
  for (int64_t i = 0; i < t.lists_count; ++i) lines.push_back("- evidence");
  if (t.has_gps_output) lines.push_back("48.8566, 2.3522");
  std::string out;
  for (const std::string& line : lines) {
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

double WinProbability(double elo_a, double elo_b, double alpha,
                      const StyleVector& bias, const StyleVector& difference) {
  double logit = (elo_a - elo_b) / alpha * std::numbers::ln10;
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    logit += bias[k] * difference[k];
  }
  return 1.0 / (1.0 + std::exp(-logit));
}

Simulation SimulateDetailed(const SyntheticWorld& world, int64_t n_battles) {
  Simulation sim;
  if (n_battles <= 0) return sim;
  sim.battles.reserve(static_cast<std::size_t>(n_battles));
  sim.drawn.reserve(static_cast<std::size_t>(n_battles));
  std::mt19937_64 rng(world.seed);
  const std::size_t n = world.models.size();
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_int_distribution<std::size_t> second(0, n - 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::string prompt = DefaultPrompt();
  const ImageRef image = PlaceholderImageRef();
  const int width = std::max<int>(6, static_cast<int>(std::to_string(n_battles).size()));
  for (int64_t b = 0; b < n_battles; ++b) {
    const std::size_t i = first(rng);
    std::size_t j = second(rng);
    if (j >= i) ++j;
    const SimulatedModel& ma = world.models[i];
    const SimulatedModel& mb = world.models[j];
    StyleFeatures fa = DrawFeatures(ma.style, rng);
    StyleFeatures fb = DrawFeatures(mb.style, rng);
    Outcome outcome = Outcome::kTie;
    const double u_tie = unit(rng);
    const double u_win = unit(rng);
    if (u_tie >= world.tie_probability) {
      const double p = WinProbability(ma.true_elo, mb.true_elo, world.alpha,
                                      world.voter_style_bias,
                                      FeatureDifference(fa, fb));
      outcome = u_win < p ? Outcome::kWinA : Outcome::kWinB;
    }
    sim.battles.push_back(BattleRecord{
        .battle_id = fmt::format("sim-{:0{}}", b + 1, width),
        .timestamp = world.start_time + absl::Seconds(b),
        .model_a = ma.id,
        .model_b = mb.id,
        .prompt = prompt,
        .image_ref = image,
        .response_a = SynthesizeResponse(fa),
        .response_b = SynthesizeResponse(fb),
        .outcome = outcome});
    sim.drawn.emplace_back(fa, fb);
  }
  return sim;
}

std::vector<BattleRecord> Simulate(const SyntheticWorld& world, int64_t n_battles) {
  return SimulateDetailed(world, n_battles).battles;
}

absl::StatusOr<RecoveryReport> RunRecovery(const SyntheticWorld& world,
                                           int64_t n_battles,
                                           const BTConfig& config) {
  if (absl::Status s = ValidateWorld(world); !s.ok()) return s;
  if (n_battles <= 0) return absl::InvalidArgumentError("n_battles must be positive");
  Simulation sim = SimulateDetailed(world, n_battles);

  RecoveryReport report;
  const double to_fit_scale = config.scale / world.alpha;
  double reference = 0.0;
  if (config.anchor_model.has_value()) {
    auto it = std::find_if(world.models.begin(), world.models.end(),
                           [&](const SimulatedModel& m) { return m.id == *config.anchor_model; });
    if (it == world.models.end()) {
      return absl::InvalidArgumentError(fmt::format(
          "anchor {} is not in the world", config.anchor_model->canonical()));
    }
    reference = it->true_elo;
  } else {
    for (const SimulatedModel& m : world.models) reference += m.true_elo;
    reference /= static_cast<double>(world.models.size());
  }
  for (const SimulatedModel& m : world.models) {
    report.truth[m.id] = (m.true_elo - reference) * to_fit_scale + config.init_rating;
  }

  auto summarize = [&](const BTFitResult& fit, std::map<ModelId, double>& ratings,
                       double& max_error, double& mean_abs) -> absl::Status {
    max_error = 0.0;
    mean_abs = 0.0;
    for (const auto& [id, truth] : report.truth) {
      auto it = fit.ratings.find(id);
      if (it == fit.ratings.end()) {
        return absl::FailedPreconditionError(
            fmt::format("model {} received no rating", id.canonical()));
      }
      ratings[id] = it->second.elo;
      const double error = std::abs(it->second.elo - truth);
      max_error = std::max(max_error, error);
      mean_abs += error;
    }
    mean_abs /= static_cast<double>(report.truth.size());
    return absl::OkStatus();
  };

  auto plain = FitBradleyTerry(sim.battles, config);
  if (!plain.ok()) return plain.status();
  if (auto s = summarize(*plain, report.plain, report.plain_max_error,
                         report.plain_mean_abs_error);
      !s.ok()) {
    return s;
  }

  const bool biased = std::any_of(world.voter_style_bias.begin(),
                                  world.voter_style_bias.end(),
                                  [](double b) { return b != 0.0; });
  if (biased) {
    std::vector<StyleVector> features;
    features.reserve(sim.drawn.size());
    for (const auto& [fa, fb] : sim.drawn) features.push_back(FeatureDifference(fa, fb));
    auto styled = FitBradleyTerryStyle(sim.battles, features, config);
    if (!styled.ok()) return styled.status();
    std::map<ModelId, double> ratings;
    double max_error = 0.0;
    double mean_abs = 0.0;
    if (auto s = summarize(*styled, ratings, max_error, mean_abs); !s.ok()) return s;
    report.style = std::move(ratings);
    report.style_max_error = max_error;
    report.style_mean_abs_error = mean_abs;
    if (styled->style_coefficients.has_value()) {
      report.beta = *styled->style_coefficients;
      StyleVector error;
      for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
        error[k] = (*report.beta)[k] - world.voter_style_bias[k];
      }
      report.beta_error = error;
    }
  }
  return report;
}

std::string WorldSummary(const SyntheticWorld& world) {
  std::string out = fmt::format("seed: {}\nalpha: {}\ntie_probability: {}\n",
                                world.seed, world.alpha, world.tie_probability);
  for (const SimulatedModel& m : world.models) {
    out += fmt::format("true_elo {:<40} {:.1f}\n", m.id.canonical(), m.true_elo);
  }
  for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
    out += fmt::format("beta {:<18} {:+.3f}\n", kStyleFeatureNames[k],
                       world.voter_style_bias[k]);
  }
  return out;
}

}  // namespace arena
