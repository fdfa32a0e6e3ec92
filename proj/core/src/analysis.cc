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

#include "arena/analysis.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "arena/format.h"
#include "json_codec.h"

namespace arena {

PairwiseMatrix ComputePairwiseMatrix(std::span<const BattleRecord> battles) {
  std::map<ModelId, int> index;
  for (const BattleRecord& b : battles) {
    index.emplace(b.model_a, 0);
    index.emplace(b.model_b, 0);
  }
  std::vector<ModelId> by_id;
  for (auto& [id, idx] : index) {
    idx = static_cast<int>(by_id.size());
    by_id.push_back(id);
  }
  const std::size_t n = by_id.size();
  std::vector<std::vector<int64_t>> wins(n, std::vector<int64_t>(n, 0));
  std::vector<std::vector<int64_t>> count(n, std::vector<int64_t>(n, 0));
  for (const BattleRecord& b : battles) {
    const int a = index[b.model_a];
    const int c = index[b.model_b];
    ++count[a][c];
    ++count[c][a];
    if (b.outcome == Outcome::kWinA) ++wins[a][c];
    if (b.outcome == Outcome::kWinB) ++wins[c][a];
  }

  std::vector<std::optional<double>> average(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    int defined = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const int64_t decisive = wins[i][j] + wins[j][i];
      if (i == j || decisive == 0) continue;
      sum += static_cast<double>(wins[i][j]) / static_cast<double>(decisive);
      ++defined;
    }
    if (defined > 0) average[i] = sum / defined;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    // Undefined averages sort last; by_id order breaks ties.
    const double ax = average[x].value_or(-1.0);
    const double ay = average[y].value_or(-1.0);
    return ax > ay;
  });

  PairwiseMatrix m;
  m.win_rate.assign(n, std::vector<std::optional<double>>(n));
  m.battle_count.assign(n, std::vector<int64_t>(n, 0));
  m.wins.assign(n, std::vector<int64_t>(n, 0));
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    m.models.push_back(by_id[i]);
    m.average_win_rate.push_back(average[i]);
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t j = order[c];
      m.battle_count[r][c] = count[i][j];
      m.wins[r][c] = wins[i][j];
      const int64_t decisive = wins[i][j] + wins[j][i];
      if (i != j && decisive > 0) {
        m.win_rate[r][c] =
            static_cast<double>(wins[i][j]) / static_cast<double>(decisive);
      }
    }
  }
  return m;
}

std::string PairwiseMatrixToJson(const PairwiseMatrix& m) {
  using internal::Json;
  Json models = Json::array();
  for (const ModelId& id : m.models) models.push_back(id.canonical());
  Json rates = Json::array();
  for (const auto& row : m.win_rate) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v ? Json(*v) : Json(nullptr));
    rates.push_back(std::move(r));
  }
  Json averages = Json::array();
  for (const auto& v : m.average_win_rate) {
    averages.push_back(v ? Json(*v) : Json(nullptr));
  }
  Json out;
  out["models"] = std::move(models);
  out["win_rate"] = std::move(rates);
  out["battle_count"] = m.battle_count;
  out["wins"] = m.wins;
  out["average_win_rate"] = std::move(averages);
  return out.dump();
}

namespace {

std::string CsvHeader(const PairwiseMatrix& m) {
  std::string out = "model";
  for (const ModelId& id : m.models) out += fmt::format(",{}", id.canonical());
  return fmt::format("{}\n", out);
}

}  // namespace

std::string WinRateToCsv(const PairwiseMatrix& m) {
  std::string out = CsvHeader(m);
  for (std::size_t r = 0; r < m.models.size(); ++r) {
    out += fmt::format("{}", m.models[r].canonical());
    for (const auto& v : m.win_rate[r]) {
      out += fmt::format(",{}", v ? fmt::format("{:.4f}", *v) : std::string());
    }
    out += fmt::format("\n");
  }
  return out;
}

std::string BattleCountToCsv(const PairwiseMatrix& m) {
  std::string out = CsvHeader(m);
  for (std::size_t r = 0; r < m.models.size(); ++r) {
    out += fmt::format("{}", m.models[r].canonical());
    for (int64_t v : m.battle_count[r]) out += fmt::format(",{}", v);
    out += fmt::format("\n");
  }
  return out;
}

absl::StatusOr<double> AgreementAccuracy(std::span<const Outcome> human,
                                         std::span<const Outcome> judge) {
  if (human.size() != judge.size()) {
    return absl::InvalidArgumentError(fmt::format("label lists differ in length: {} vs {}", human.size(), judge.size()));
  }
  if (human.empty()) {
    return absl::InvalidArgumentError("label lists are empty");
  }
  std::size_t agree = 0;
  for (std::size_t i = 0; i < human.size(); ++i) {
    if (human[i] == judge[i]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(human.size());
}

std::string ImageAnnotationToJsonLine(const ImageAnnotation& a) {
  internal::Json j;
  j["image_ref"] = {{"sha256", a.image_ref.sha256},
                    {"filename", a.image_ref.filename}};
  j["indoor"] = a.indoor;
  j["has_text"] = a.has_text;
  j["has_landmark"] = a.has_landmark;
  return j.dump();
}

absl::StatusOr<ImageAnnotation> ImageAnnotationFromJsonLine(
    std::string_view line) {
  auto j = internal::ParseJson(line);
  if (!j.ok()) return j.status();
  if (!j->is_object()) {
    return absl::InvalidArgumentError("annotation must be a JSON object");
  }
  ImageAnnotation a;
  auto ref = j->find("image_ref");
  if (ref == j->end() || !ref->is_object()) {
    return absl::InvalidArgumentError("field 'image_ref' must be an object");
  }
  auto sha = internal::GetString(*ref, "sha256");
  if (!sha.ok()) return sha.status();
  auto file = internal::GetString(*ref, "filename");
  if (!file.ok()) return file.status();
  a.image_ref = {*sha, *file};
  auto indoor = internal::GetBool(*j, "indoor");
  if (!indoor.ok()) return indoor.status();
  auto text = internal::GetBool(*j, "has_text");
  if (!text.ok()) return text.status();
  auto landmark = internal::GetBool(*j, "has_landmark");
  if (!landmark.ok()) return landmark.status();
  a.indoor = *indoor;
  a.has_text = *text;
  a.has_landmark = *landmark;
  return a;
}

absl::StatusOr<std::vector<ImageAnnotation>> ReadAnnotations(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(fmt::format("cannot open {}", path));
  std::vector<ImageAnnotation> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto a = ImageAnnotationFromJsonLine(line);
    if (!a.ok()) {
      return absl::InvalidArgumentError(
          fmt::format("{}:{}: {}", path, line_no, a.status().message()));
    }
    out.push_back(*std::move(a));
  }
  return out;
}

CompositionReport DatasetComposition(
    std::span<const ImageAnnotation> annotations) {
  CompositionReport r;
  r.total = static_cast<int64_t>(annotations.size());
  if (r.total == 0) return r;
  int64_t indoor = 0, text = 0, landmark = 0;
  for (const ImageAnnotation& a : annotations) {
    indoor += a.indoor;
    text += a.has_text;
    landmark += a.has_landmark;
  }
  const auto pct = [&](int64_t k) {
    return 100.0 * static_cast<double>(k) / static_cast<double>(r.total);
  };
  r.indoor_percent = pct(indoor);
  r.outdoor_percent = pct(r.total - indoor);
  r.has_text_percent = pct(text);
  r.no_text_percent = pct(r.total - text);
  r.has_landmark_percent = pct(landmark);
  r.no_landmark_percent = pct(r.total - landmark);
  return r;
}

std::string CompositionToJson(const CompositionReport& report) {
  internal::Json j;
  j["total"] = report.total;
  j["indoor_percent"] = report.indoor_percent;
  j["outdoor_percent"] = report.outdoor_percent;
  j["has_text_percent"] = report.has_text_percent;
  j["no_text_percent"] = report.no_text_percent;
  j["has_landmark_percent"] = report.has_landmark_percent;
  j["no_landmark_percent"] = report.no_landmark_percent;
  return j.dump(2);
}

}  // namespace arena
