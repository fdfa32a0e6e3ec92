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

#include <random>
#include <sstream>
#include <string>

#include "arena/style_features.h"
#include "gtest/gtest.h"

namespace arena {
namespace {

// Independent word counter for ASCII text.
int64_t CountAsciiWords(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int64_t n = 0;
  while (in >> word) ++n;
  return n;
}

TEST(StyleFeaturesTest, MixedMarkdownResponse) {
  const std::string text =
      "## Location\n- clue one\n- clue two\n**Paris**, France at (48.8566, 2.3522)";
  const StyleFeatures f = ExtractFeatures(text);
  // Markdown tokens ("##", "-") are words under the whitespace rule.
  EXPECT_EQ(f.response_length, CountAsciiWords(text));
  EXPECT_EQ(f.response_length, 13);
  EXPECT_EQ(f.lists_count, 2);
  EXPECT_EQ(f.headers_count, 1);
  EXPECT_EQ(f.emphasis_count, 1);
  EXPECT_TRUE(f.has_gps_output);
}

TEST(StyleFeaturesTest, PlainTextHasOnlyLength) {
  const StyleFeatures f = ExtractFeatures("Tokyo, Japan");
  EXPECT_EQ(f, (StyleFeatures{2, 0, 0, 0, false}));
  EXPECT_EQ(ExtractFeatures(""), StyleFeatures{});
}

TEST(StyleFeaturesTest, UnicodeWhitespaceSeparatesWords) {
  EXPECT_EQ(ExtractFeatures("a　b c d").response_length, 4);
  EXPECT_EQ(ExtractFeatures("café naïve").response_length, 2);
}

TEST(StyleFeaturesTest, ListItems) {
  EXPECT_EQ(ExtractFeatures("- a\n* b\n+ c\n1. d\n2) e").lists_count, 5);
  EXPECT_EQ(ExtractFeatures("  - indented").lists_count, 1);
  EXPECT_EQ(ExtractFeatures("-not a list\n1.5 metres\n*bold*").lists_count, 0);
}

TEST(StyleFeaturesTest, Headers) {
  EXPECT_EQ(ExtractFeatures("# a\n###### b\n####### c\n#hashtag").headers_count, 2);
}

struct EmphasisCase {
  const char* text;
  int64_t expected;
};

void PrintTo(const EmphasisCase& c, std::ostream* os) { *os << c.expected; }

class EmphasisTest : public ::testing::TestWithParam<EmphasisCase> {};

TEST_P(EmphasisTest, CountsSpans) {
  EXPECT_EQ(ExtractFeatures(GetParam().text).emphasis_count, GetParam().expected)
      << GetParam().text;
}

INSTANTIATE_TEST_SUITE_P(
    Spans, EmphasisTest,
    ::testing::Values(EmphasisCase{"**bold**", 1}, EmphasisCase{"*it*", 1},
                      EmphasisCase{"__bold__ and _it_", 2},
                      EmphasisCase{"**a** **b** *c*", 3},
                      EmphasisCase{"snake_case_name", 0},
                      EmphasisCase{"2 * 3 * 4", 0},
                      EmphasisCase{"* not a span*", 0},
                      EmphasisCase{"- item with *stress*", 1},
                      EmphasisCase{"**open\nclose**", 0},
                      EmphasisCase{"## *Header* text", 1}),
    [](const auto& info) { return "case_" + std::to_string(info.index); });

TEST(StyleFeaturesTest, GpsDetection) {
  EXPECT_TRUE(ContainsGpsCoordinates("at 48.8566, 2.3522"));
  EXPECT_TRUE(ContainsGpsCoordinates("(-33.86, 151.21)"));
  EXPECT_TRUE(ContainsGpsCoordinates("Latitude: 35.6762, Longitude: 139.6503"));
  EXPECT_FALSE(ContainsGpsCoordinates("48.8, 2.3"));
  EXPECT_FALSE(ContainsGpsCoordinates("95.1234, 10.1234"));
  EXPECT_FALSE(ContainsGpsCoordinates("10.1234, 190.1234"));
  EXPECT_FALSE(ContainsGpsCoordinates("Paris, France"));
}

TEST(FeatureDifferenceTest, NormalizedDifference) {
  const StyleFeatures a{30, 3, 0, 1, true};
  const StyleFeatures b{10, 1, 0, 0, false};
  const StyleVector d = FeatureDifference(a, b);
  EXPECT_DOUBLE_EQ(d[0], 0.5);
  EXPECT_DOUBLE_EQ(d[1], 0.5);
  EXPECT_DOUBLE_EQ(d[2], 0.0);
  EXPECT_DOUBLE_EQ(d[3], 1.0);
  EXPECT_DOUBLE_EQ(d[4], 1.0);
}

TEST(FeatureDifferenceTest, AntisymmetricAndBoundedOnRandomInputs) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> count(0, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const StyleFeatures a{count(rng), count(rng), count(rng), count(rng), count(rng) % 2 == 0};
    const StyleFeatures b{count(rng), count(rng), count(rng), count(rng), count(rng) % 2 == 0};
    const StyleVector ab = FeatureDifference(a, b);
    const StyleVector ba = FeatureDifference(b, a);
    for (std::size_t k = 0; k < kNumStyleFeatures; ++k) {
      EXPECT_DOUBLE_EQ(ab[k], -ba[k]);
      EXPECT_LE(std::abs(ab[k]), 1.0);
    }
  }
}

TEST(StyleFeaturesTest, AsciiWordCountMatchesIndependentSplitter) {
  std::mt19937 rng(17);
  const std::string alphabet = "ab #-*_\n\t.,1";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (int i = 0; i < 80; ++i) text += alphabet[pick(rng)];
    EXPECT_EQ(ExtractFeatures(text).response_length, CountAsciiWords(text)) << text;
  }
}

}  // namespace
}  // namespace arena
