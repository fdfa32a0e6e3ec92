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

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "arena/battle_log.h"
#include "arena/image_store.h"
#include "arena/model.h"
#include "arena/registry.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace arena {
namespace {

using ::arena::testing::FreshDir;
using ::arena::testing::MakeBattle;
using ::arena::testing::ReadAll;
using ::testing::HasSubstr;

TEST(ModelIdTest, ParsesAndLowercases) {
  auto id = ModelId::Parse("OpenAI/GPT-4o");
  ASSERT_TRUE(id.ok());
  EXPECT_EQ(id->canonical(), "openai/gpt-4o");
  EXPECT_EQ(id->provider(), "openai");
  EXPECT_EQ(id->name(), "gpt-4o");
}

TEST(ModelIdTest, RejectsMalformed) {
  for (const char* bad : {"", "gpt-4o", "/x", "x/", "a/b/c", "a /b", "a/b c"}) {
    EXPECT_FALSE(ModelId::Parse(bad).ok()) << bad;
  }
}

TEST(ModelIdTest, OrderingAndHashFollowCanonicalForm) {
  const ModelId a = MustParseModelId("a/x");
  const ModelId b = MustParseModelId("A/X");
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::hash<ModelId>()(a), std::hash<ModelId>()(b));
  EXPECT_LT(MustParseModelId("a/x"), MustParseModelId("b/a"));
}

TEST(OutcomeTest, WireFormRoundTripsAndSwaps) {
  for (Outcome o : {Outcome::kWinA, Outcome::kWinB, Outcome::kTie}) {
    auto back = OutcomeFromWinner(OutcomeToWinner(o));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, o);
    EXPECT_DOUBLE_EQ(ScoreForA(Swapped(o)), 1.0 - ScoreForA(o));
  }
  EXPECT_FALSE(OutcomeFromWinner("draw").ok());
}

TEST(TimestampTest, WholeSecondUtc) {
  const absl::Time t = absl::FromUnixMillis(1756728000123);
  EXPECT_EQ(FormatTimestamp(t), "2025-09-01T12:00:00Z");
  auto parsed = ParseTimestamp("2025-09-01T14:00:00.9+02:00");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(FormatTimestamp(*parsed), "2025-09-01T12:00:00Z");
  EXPECT_FALSE(ParseTimestamp("yesterday").ok());
}

TEST(BattleRecordTest, JsonLineRoundTrip) {
  BattleRecord r = MakeBattle("b1", "openai/gpt-4o", "google/gemini-2.5-pro",
                              Outcome::kWinB, "line \"one\"\n- two", "ünïcode ✓");
  const std::string line = BattleRecordToJsonLine(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  auto back = BattleRecordFromJsonLine(line);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, r);
  EXPECT_THAT(line, HasSubstr("\"winner\":\"model_b\""));
}

TEST(BattleRecordTest, ValidationRejectsBrokenRecords) {
  BattleRecord same = MakeBattle("b", "a/x", "a/x", Outcome::kTie);
  EXPECT_FALSE(ValidateBattleRecord(same).ok());
  BattleRecord empty = MakeBattle("b", "a/x", "a/y", Outcome::kTie, "", "r");
  EXPECT_FALSE(ValidateBattleRecord(empty).ok());
  BattleRecord bad_hash = MakeBattle("b", "a/x", "a/y", Outcome::kTie);
  bad_hash.image_ref.sha256 = "ABC";
  EXPECT_FALSE(ValidateBattleRecord(bad_hash).ok());
  BattleRecord no_id = MakeBattle("", "a/x", "a/y", Outcome::kTie);
  EXPECT_FALSE(ValidateBattleRecord(no_id).ok());
  EXPECT_FALSE(BattleRecordFromJsonLine("{\"battle_id\": 3}").ok());
}

TEST(BattleLogTest, AppendReadAndReopen) {
  const auto path = FreshDir("log") / "battles.jsonl";
  {
    auto log = BattleLog::Open(path);
    ASSERT_TRUE(log.ok()) << log.status();
    EXPECT_TRUE((*log)->Append(MakeBattle("b1", "a/x", "a/y", Outcome::kWinA)).ok());
    EXPECT_TRUE((*log)->Append(MakeBattle("b2", "a/y", "a/z", Outcome::kTie)).ok());
    EXPECT_EQ((*log)->size(), 2u);
  }
  auto log = BattleLog::Open(path);
  ASSERT_TRUE(log.ok());
  absl::Status dup = (*log)->Append(MakeBattle("b1", "a/x", "a/y", Outcome::kWinB));
  EXPECT_TRUE(absl::IsAlreadyExists(dup)) << dup;
  EXPECT_TRUE(absl::IsInvalidArgument(
      (*log)->Append(MakeBattle("b3", "a/x", "a/x", Outcome::kWinB))));
  auto read = (*log)->Read();
  ASSERT_TRUE(read.ok());
  ASSERT_EQ(read->records.size(), 2u);
  EXPECT_EQ(read->records[0].battle_id, "b1");
  EXPECT_EQ(read->records[1].outcome, Outcome::kTie);
}

TEST(BattleLogTest, MissingDirectoryAndFile) {
  const auto dir = FreshDir("missing");
  EXPECT_FALSE(BattleLog::Open(dir / "nope" / "battles.jsonl").ok());
  EXPECT_TRUE(absl::IsNotFound(ReadBattles(dir / "absent.jsonl").status()));
}

TEST(BattleLogTest, SkipsCorruptLinesAndIgnoresPartialTail) {
  const auto path = FreshDir("corrupt") / "battles.jsonl";
  {
    std::ofstream out(path);
    out << BattleRecordToJsonLine(MakeBattle("b1", "a/x", "a/y", Outcome::kWinA)) << "\n";
    out << "{not json}\n\n";
    out << BattleRecordToJsonLine(MakeBattle("b2", "a/x", "a/y", Outcome::kWinB)) << "\n";
    out << "{\"battle_id\": \"half";
  }
  auto read = ReadBattles(path);
  ASSERT_TRUE(read.ok());
  EXPECT_EQ(read->records.size(), 2u);
  EXPECT_EQ(read->skipped_lines, 1u);
  EXPECT_FALSE(read->warnings.empty());
}

TEST(BattleLogTest, FilterIsConjunctive) {
  BattleRecord early = MakeBattle("b1", "a/x", "a/y", Outcome::kWinA);
  BattleRecord late = MakeBattle("b2", "a/y", "a/z", Outcome::kWinA);
  late.timestamp = early.timestamp + absl::Hours(2);
  BattleFilter filter{.since = early.timestamp + absl::Hours(1),
                      .models = {MustParseModelId("a/z")}};
  EXPECT_FALSE(filter.Matches(early));
  EXPECT_TRUE(filter.Matches(late));
  filter.models = {MustParseModelId("a/x")};
  EXPECT_FALSE(filter.Matches(late));
}

TEST(BattleLogTest, ConcurrentAppendsKeepEveryLineIntact) {
  const auto path = FreshDir("concurrent") / "battles.jsonl";
  auto log = BattleLog::Open(path);
  ASSERT_TRUE(log.ok());
  constexpr int kThreads = 8;
  constexpr int kPerThread = 25;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < kPerThread; ++i) {
        const std::string id = "t" + std::to_string(t) + "-" + std::to_string(i);
        ASSERT_TRUE((*log)->Append(MakeBattle(id, "a/x", "a/y", Outcome::kWinA,
                                              std::string(500, 'x'), "y"))
                        .ok());
      }
    });
  }
  for (auto& th : threads) th.join();
  auto read = ReadBattles(path);
  ASSERT_TRUE(read.ok());
  EXPECT_EQ(read->skipped_lines, 0u);
  std::set<std::string> ids;
  for (const auto& r : read->records) ids.insert(r.battle_id);
  EXPECT_EQ(ids.size(), static_cast<std::size_t>(kThreads * kPerThread));
}

TEST(ImageStoreTest, SniffsMediaTypes) {
  EXPECT_EQ(*SniffMediaType(PlaceholderPng()), MediaType::kPng);
  EXPECT_EQ(*SniffMediaType(std::string("\xFF\xD8\xFF\xE0", 4)), MediaType::kJpeg);
  EXPECT_EQ(*SniffMediaType(std::string("RIFF\0\0\0\0WEBPVP8 ", 16)), MediaType::kWebp);
  EXPECT_FALSE(SniffMediaType("GIF89a").ok());
  EXPECT_EQ(*MediaTypeFromMime("image/jpeg"), MediaType::kJpeg);
  EXPECT_FALSE(MediaTypeFromMime("image/gif").ok());
}

TEST(ImageStoreTest, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ImageStoreTest, StripsJpegExifSegment) {
  const std::string soi("\xFF\xD8", 2);
  const std::string app1("\xFF\xE1\x00\x0C" "Exif\x00\x00\x01\x02\x03\x04", 14);
  const std::string app0("\xFF\xE0\x00\x06JFIF", 8);
  const std::string scan("\xFF\xDA\x00\x02\x11\x22\x33\xFF\xD9", 9);
  auto stripped = StripExif(soi + app1 + app0 + scan, MediaType::kJpeg);
  ASSERT_TRUE(stripped.ok()) << stripped.status();
  EXPECT_EQ(*stripped, soi + app0 + scan);
}

TEST(ImageStoreTest, StripsPngExifChunk) {
  std::string png(PlaceholderPng());
  const std::string chunk("\x00\x00\x00\x04" "eXIfabcd" "\x00\x00\x00\x00", 16);
  std::string with_exif = png.substr(0, 33) + chunk + png.substr(33);
  auto stripped = StripExif(with_exif, MediaType::kPng);
  ASSERT_TRUE(stripped.ok()) << stripped.status();
  EXPECT_EQ(*stripped, png);
}

std::string Le32(uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  return s;
}

TEST(ImageStoreTest, StripsWebpExifChunkAndFlag) {
  const std::string vp8x = "VP8X" + Le32(10) + std::string("\x08\0\0\0\0\0\0\0\0\0", 10);
  const std::string vp8l = "VP8L" + Le32(4) + std::string("\x2F\0\0\0", 4);
  const std::string exif = "EXIF" + Le32(6) + std::string("abcdef", 6);
  const std::string body = "WEBP" + vp8x + vp8l + exif;
  const std::string file = "RIFF" + Le32(static_cast<uint32_t>(body.size())) + body;
  auto stripped = StripExif(file, MediaType::kWebp);
  ASSERT_TRUE(stripped.ok()) << stripped.status();
  EXPECT_EQ(stripped->find("EXIF"), std::string::npos);
  EXPECT_EQ((*stripped)[20] & 0x08, 0);
  EXPECT_EQ(stripped->substr(4, 4), Le32(static_cast<uint32_t>(stripped->size() - 8)));
}

TEST(ImageStoreTest, RejectsTypeMismatch) {
  EXPECT_FALSE(StripExif(PlaceholderPng(), MediaType::kJpeg).ok());
}

TEST(ImageStoreTest, PutIsContentAddressedAndIdempotent) {
  const auto root = FreshDir("images");
  ImageStore store(root);
  auto first = store.Put(PlaceholderPng(), MediaType::kPng);
  ASSERT_TRUE(first.ok()) << first.status();
  auto second = store.Put(PlaceholderPng(), MediaType::kPng);
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(*first, *second);
  EXPECT_EQ(first->sha256, Sha256Hex(PlaceholderPng()));
  EXPECT_EQ(first->filename,
            first->sha256.substr(0, 2) + "/" + first->sha256 + ".png");
  auto bytes = store.Get(*first);
  ASSERT_TRUE(bytes.ok());
  EXPECT_EQ(*bytes, PlaceholderPng());

  std::ofstream(root / first->filename, std::ios::binary | std::ios::trunc) << "tampered";
  EXPECT_TRUE(absl::IsDataLoss(store.Get(*first).status()));
}

TEST(RegistryTest, DefaultRosterHasSeventeenActiveModels) {
  const ModelRegistry registry = DefaultRegistry();
  EXPECT_EQ(registry.entries().size(), 17u);
  EXPECT_EQ(registry.ActiveModels().size(), 17u);
  EXPECT_TRUE(registry.IsActive(MustParseModelId("openai/gpt-4o")));
  EXPECT_FALSE(registry.IsActive(MustParseModelId("nobody/none")));
}

TEST(RegistryTest, RejectsDuplicatesAndTracksActivity) {
  ModelRegistry registry;
  ASSERT_TRUE(registry.Add({MustParseModelId("a/x"), "X", false, true}).ok());
  EXPECT_TRUE(absl::IsAlreadyExists(
      registry.Add({MustParseModelId("A/X"), "X2", false, true})));
  ASSERT_TRUE(registry.Add({MustParseModelId("a/y"), "Y", false, false}).ok());
  EXPECT_EQ(registry.ActiveModels(), std::vector<ModelId>{MustParseModelId("a/x")});
}

}  // namespace
}  // namespace arena
