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

#ifndef ARENA_STYLE_FEATURES_H_
#define ARENA_STYLE_FEATURES_H_

#include <array>
#include <cstdint>
#include <string_view>

namespace arena {

inline constexpr std::size_t kNumStyleFeatures = 5;

// Order shared by feature differences, style coefficients and exports.
inline constexpr std::array<std::string_view, kNumStyleFeatures>
    kStyleFeatureNames = {"response_length", "lists_count", "headers_count",
                          "emphasis_count", "gps_output_ratio"};

using StyleVector = std::array<double, kNumStyleFeatures>;

// Surface-level formatting measurements of one response.
struct StyleFeatures {
  int64_t response_length = 0;  // whitespace-delimited words
  int64_t lists_count = 0;      // ordered + unordered list items
  int64_t headers_count = 0;    // ATX headers, levels 1-6
  int64_t emphasis_count = 0;   // bold + italic spans
  bool has_gps_output = false;  // contains a latitude/longitude pair

  friend bool operator==(const StyleFeatures&, const StyleFeatures&) = default;
};

// Parsing rules, applied line by line:
//   * words: maximal runs of non-whitespace (Unicode whitespace), markdown
//     punctuation tokens included;
//   * list item: /^\s*([-*+]|\d+[.)])\s+/;
//   * header:    /^\s*#{1,6}\s+/;
//   * emphasis:  non-overlapping **x**, __x__, *x*, _x_ spans within one line,
//     longest delimiter first; the content may not start or end with
//     whitespace and '_' delimiters may not sit inside a word;
//   * GPS: a "lat, lon" decimal pair (two or more decimals each, optional
//     parentheses or degree signs) within [-90, 90] x [-180, 180], or a
//     "lat ... lon/long/lng ..." labelled pair in range.
StyleFeatures ExtractFeatures(std::string_view response);

// Per-feature (a - b) / (a + b), 0 when a + b == 0. The GPS flag enters as
// 1.0 / 0.0. Components lie in [-1, 1].
StyleVector FeatureDifference(const StyleFeatures& a, const StyleFeatures& b);

// True when `text` contains a latitude/longitude prediction.
bool ContainsGpsCoordinates(std::string_view text);

}  // namespace arena

#endif  // ARENA_STYLE_FEATURES_H_
