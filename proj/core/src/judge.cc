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

#include "arena/judge.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <future>
#include <numeric>
#include <random>

#include "absl/strings/ascii.h"
#include "arena/format.h"
#include "json_codec.h"

namespace arena {
namespace {

using internal::Json;

std::string_view TrimLabelNoise(std::string_view s) {
  auto noise = [](char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    return std::isspace(u) || std::ispunct(u);
  };
  while (!s.empty() && noise(s.front())) s.remove_prefix(1);
  while (!s.empty() && noise(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<JudgeLabel> BareLabel(std::string_view text) {
  const std::string token = absl::AsciiStrToLower(std::string(TrimLabelNoise(text)));
  if (token == "win") return JudgeLabel::kWin;
  if (token == "loss") return JudgeLabel::kLoss;
  if (token == "tie") return JudgeLabel::kTie;
  return std::nullopt;
}

int LabelIndex(JudgeLabel label) { return static_cast<int>(label); }

}  // namespace

std::string_view JudgeLabelName(JudgeLabel label) {
  switch (label) {
    case JudgeLabel::kWin:
      return "win";
    case JudgeLabel::kLoss:
      return "loss";
    case JudgeLabel::kTie:
      return "tie";
    case JudgeLabel::kInvalid:
      return "INVALID";
  }
  return "INVALID";
}

absl::StatusOr<JudgeLabel> JudgeLabelFromName(std::string_view name) {
  for (JudgeLabel l : {JudgeLabel::kWin, JudgeLabel::kLoss, JudgeLabel::kTie,
                       JudgeLabel::kInvalid}) {
    if (name == JudgeLabelName(l)) return l;
  }
  return absl::InvalidArgumentError(fmt::format("unknown judge label \"{}\"", name));
}

JudgeLabel ParseVerdict(std::string_view raw_text) {
  if (auto label = BareLabel(raw_text)) return *label;
  std::size_t pos = 0;
  while (pos < raw_text.size()) {
    std::size_t end = raw_text.find('\n', pos);
    if (end == std::string_view::npos) end = raw_text.size();
    std::string_view line = raw_text.substr(pos, end - pos);
    if (!TrimLabelNoise(line).empty()) {
      return BareLabel(line).value_or(JudgeLabel::kInvalid);
    }
    pos = end + 1;
  }
  return JudgeLabel::kInvalid;
}

JudgeLabel LabelForOutcome(Outcome outcome) {
  switch (outcome) {
    case Outcome::kWinA:
      return JudgeLabel::kWin;
    case Outcome::kWinB:
      return JudgeLabel::kLoss;
    case Outcome::kTie:
      return JudgeLabel::kTie;
  }
  return JudgeLabel::kTie;
}

std::optional<Outcome> OutcomeForLabel(JudgeLabel label) {
  switch (label) {
    case JudgeLabel::kWin:
      return Outcome::kWinA;
    case JudgeLabel::kLoss:
      return Outcome::kWinB;
    case JudgeLabel::kTie:
      return Outcome::kTie;
    case JudgeLabel::kInvalid:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string RenderJudgePrompt(std::string_view prompt,
                              std::string_view response_a,
                              std::string_view response_b) {
  return fmt::format(
      "You are an expert evaluator in image geolocation tasks.\n"
      "I will give you two model responses to the same geolocation prompt.\n"
      "\n"
      "Here is the prompt:\n"
      "- Prompt: {}\n"
      "- Image: {}\n"
      "\n"
      "Response A:\n"
      "{}\n"
      "\n"
      "Response B:\n"
      "{}\n"
      "\n"
      "Your task is to decide which response is better based on:\n"
      "1. Accuracy of the predicted location\n"
      "2. Strength of reasoning and evidence\n"
      "3. Clarity and specificity\n"
      "\n"
      "Output only one word:\n"
      "- \"win\" if Response A is better\n"
      "- \"loss\" if Response B is better\n"
      "- \"tie\" if both are equally good\n",
      prompt, kImageSlot, response_a, response_b);
}

std::string JudgeVerdictToJsonLine(const JudgeVerdict& verdict) {
  Json j = {{"battle_id", verdict.battle_id},
            {"judge_model", verdict.judge_model.canonical()},
            {"label", JudgeLabelName(verdict.label)},
            {"raw_text", verdict.raw_text}};
  return j.dump();
}

ImageLoader PlaceholderImageLoader() {
  return [](const ImageRef&) -> absl::StatusOr<std::pair<std::string, MediaType>> {
    return std::make_pair(std::string(PlaceholderPng()), MediaType::kPng);
  };
}

ImageLoader StoreImageLoader(std::shared_ptr<const ImageStore> store,
                             bool allow_placeholder) {
  return [store = std::move(store), allow_placeholder](const ImageRef& ref)
             -> absl::StatusOr<std::pair<std::string, MediaType>> {
    if (allow_placeholder && ref == PlaceholderImageRef()) {
      return std::make_pair(std::string(PlaceholderPng()), MediaType::kPng);
    }
    auto bytes = store == nullptr
                     ? absl::StatusOr<std::string>(absl::NotFoundError("no image store"))
                     : store->Get(ref);
    if (!bytes.ok()) {
      if (allow_placeholder && absl::IsNotFound(bytes.status())) {
        return std::make_pair(std::string(PlaceholderPng()), MediaType::kPng);
      }
      return bytes.status();
    }
    auto type = SniffMediaType(*bytes);
    if (!type.ok()) return type.status();
    return std::make_pair(*std::move(bytes), *type);
  };
}

Judge::Judge(std::shared_ptr<ProviderRouter> router, ModelId judge_model,
             ImageLoader loader)
    : router_(std::move(router)),
      judge_model_(std::move(judge_model)),
      loader_(std::move(loader)) {}

absl::StatusOr<JudgeVerdict> Judge::JudgePair(const BattleRecord& record) const {
  if (record.response_a.empty() || record.response_b.empty()) {
    return absl::InvalidArgumentError(
        fmt::format("battle {} lacks a response", record.battle_id));
  }
  auto image = loader_(record.image_ref);
  if (!image.ok()) return image.status();
  GenerationRequest request{
      .model = judge_model_,
      .prompt = RenderJudgePrompt(record.prompt, record.response_a,
                                  record.response_b),
      .image = std::move(image->first),
      .media_type = image->second};
  auto result = router_->Generate(request);
  if (!result.ok()) return result.status();
  if (result->status != ProviderStatus::kOk) {
    return absl::UnavailableError(fmt::format(
        "judge {} failed on battle {}: {} {}", judge_model_.canonical(),
        record.battle_id, ProviderStatusName(result->status), result->error));
  }
  return JudgeVerdict{record.battle_id, judge_model_,
                      ParseVerdict(result->response_text),
                      std::move(result->response_text)};
}

std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k,
                                                  uint64_t seed) {
  k = std::min(k, n);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

absl::StatusOr<AlignmentReport> RunAlignmentStudy(
    const Judge& judge, std::span<const BattleRecord> battles,
    const AlignmentOptions& options) {
  if (options.sample_size <= 0) {
    return absl::InvalidArgumentError("sample size must be positive");
  }
  const auto k = static_cast<std::size_t>(options.sample_size);
  if (battles.size() < k) {
    return absl::InvalidArgumentError(fmt::format(
        "insufficient battles: {} available, sample size {}", battles.size(), k));
  }
  AlignmentReport report{.judge_model = judge.model()};
  report.sample_indices = SampleWithoutReplacement(battles.size(), k, options.seed);

  std::vector<absl::StatusOr<JudgeVerdict>> results(
      k, absl::UnknownError("not judged"));
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(options.concurrency), 1, k);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < k; i = next++) {
      results[i] = judge.JudgePair(battles[report.sample_indices[i]]);
    }
  };
  std::vector<std::future<void>> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, work));
  }
  work();
  for (auto& f : pool) f.get();

  std::vector<Outcome> human;
  std::vector<Outcome> judged;
  for (std::size_t i = 0; i < k; ++i) {
    if (!results[i].ok()) return results[i].status();
    const BattleRecord& record = battles[report.sample_indices[i]];
    const JudgeVerdict& v = *results[i];
    ++report.confusion[LabelIndex(LabelForOutcome(record.outcome))][LabelIndex(v.label)];
    if (auto outcome = OutcomeForLabel(v.label)) {
      human.push_back(record.outcome);
      judged.push_back(*outcome);
      ++report.valid;
    } else {
      ++report.invalid;
    }
    report.verdicts.push_back(*std::move(results[i]));
  }
  if (!human.empty()) {
    auto accuracy = AgreementAccuracy(human, judged);
    if (!accuracy.ok()) return accuracy.status();
    report.accuracy = *accuracy;
  }
  return report;
}

std::string AlignmentReportToText(const AlignmentReport& report) {
  std::string out = fmt::format("judge: {}\n", report.judge_model.canonical());
  out += fmt::format("sampled: {}\nvalid: {}\ninvalid: {}\n",
                     report.sample_indices.size(), report.valid, report.invalid);
  out += report.accuracy
             ? fmt::format("accuracy: {:.4f}\n", *report.accuracy)
             : std::string("accuracy: n/a (no valid verdicts)\n");
  out += fmt::format("{:<12}{:>8}{:>8}{:>8}{:>8}\n", "human\\judge", "win",
                     "loss", "tie", "INVALID");
  constexpr std::array<std::string_view, 3> kRows = {"win", "loss", "tie"};
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& row = report.confusion[r];
    out += fmt::format("{:<12}{:>8}{:>8}{:>8}{:>8}\n", kRows[r], row[0], row[1],
                       row[2], row[3]);
  }
  return out;
}

std::string AlignmentReportToJson(const AlignmentReport& report) {
  Json confusion = Json::object();
  constexpr std::array<std::string_view, 3> kRows = {"win", "loss", "tie"};
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& row = report.confusion[r];
    confusion[std::string(kRows[r])] = {
        {"win", row[0]}, {"loss", row[1]}, {"tie", row[2]}, {"INVALID", row[3]}};
  }
  Json j = {{"judge_model", report.judge_model.canonical()},
            {"sampled", report.sample_indices.size()},
            {"valid", report.valid},
            {"invalid", report.invalid},
            {"accuracy", report.accuracy ? Json(*report.accuracy) : Json(nullptr)},
            {"confusion", confusion}};
  return j.dump(2);
}

std::string AnnotationPrompt() {
  return "Look at the photo and answer with a single JSON object and nothing "
         "else, in exactly this shape:\n"
         "{\"indoor\": true or false, \"has_text\": true or false, "
         "\"has_landmark\": true or false}\n"
         "indoor: the scene is inside a building or vehicle.\n"
         "has_text: legible writing such as signs, labels or plates is clearly "
         "visible.\n"
         "has_landmark: a famous site, monument or natural feature is shown.\n";
}

absl::StatusOr<ImageAnnotation> ParseAnnotation(std::string_view raw_text,
                                                const ImageRef& ref) {
  std::string_view text = raw_text;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    return s;
  };
  text = trim(text);
  if (text.starts_with("```") && text.ends_with("```") && text.size() >= 6) {
    text.remove_suffix(3);
    text.remove_prefix(3);
    if (text.starts_with("json")) text.remove_prefix(4);
    text = trim(text);
  }
  auto parsed = internal::ParseJson(text);
  if (!parsed.ok() || !parsed->is_object()) {
    return absl::InvalidArgumentError("annotation is not a JSON object");
  }
  if (parsed->size() != 3) {
    return absl::InvalidArgumentError(
        "annotation must hold exactly indoor, has_text and has_landmark");
  }
  ImageAnnotation annotation{.image_ref = ref};
  auto indoor = internal::GetBool(*parsed, "indoor");
  auto text_present = internal::GetBool(*parsed, "has_text");
  auto landmark = internal::GetBool(*parsed, "has_landmark");
  for (const auto* field : {&indoor, &text_present, &landmark}) {
    if (!field->ok()) return field->status();
  }
  annotation.indoor = *indoor;
  annotation.has_text = *text_present;
  annotation.has_landmark = *landmark;
  return annotation;
}

absl::StatusOr<ImageAnnotation> AnnotateImage(ProviderRouter& router,
                                              const ModelId& annotator,
                                              const ImageRef& ref,
                                              const ImageLoader& loader) {
  auto image = loader(ref);
  if (!image.ok()) return image.status();
  GenerationRequest request{.model = annotator,
                            .prompt = AnnotationPrompt(),
                            .image = std::move(image->first),
                            .media_type = image->second};
  absl::Status last;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto result = router.Generate(request);
    if (!result.ok()) return result.status();
    if (result->status != ProviderStatus::kOk) {
      return absl::UnavailableError(fmt::format(
          "annotator {} failed: {} {}", annotator.canonical(),
          ProviderStatusName(result->status), result->error));
    }
    auto annotation = ParseAnnotation(result->response_text, ref);
    if (annotation.ok()) return annotation;
    last = annotation.status();
  }
  return absl::InvalidArgumentError(fmt::format(
      "annotation for {} rejected: {}", ref.sha256, last.message()));
}

}  // namespace arena
