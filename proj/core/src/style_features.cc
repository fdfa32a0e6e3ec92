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

#include "arena/style_features.h"

#include <cctype>
#include <cstdlib>
#include <regex>
#include <string>

namespace arena {
namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Length in bytes of a Unicode whitespace code point starting at `pos`, or 0.
std::size_t WhitespaceLength(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(s[pos + k]);
  };
  if (IsAsciiSpace(s[pos])) return 1;
  const std::size_t left = s.size() - pos;
  if (left >= 2 && byte(0) == 0xC2 && (byte(1) == 0x85 || byte(1) == 0xA0)) {
    return 2;
  }
  if (left >= 3) {
    const unsigned a = byte(0), b = byte(1), c = byte(2);
    if (a == 0xE1 && b == 0x9A && c == 0x80) return 3;  // U+1680
    if (a == 0xE2 && b == 0x80 &&
        ((c >= 0x80 && c <= 0x8A) || c == 0xA8 || c == 0xA9 || c == 0xAF)) {
      return 3;  // U+2000..U+200A, U+2028, U+2029, U+202F
    }
    if (a == 0xE2 && b == 0x81 && c == 0x9F) return 3;  // U+205F
    if (a == 0xE3 && b == 0x80 && c == 0x80) return 3;  // U+3000
  }
  return 0;
}

int64_t CountWords(std::string_view s) {
  int64_t words = 0;
  bool in_word = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t ws = WhitespaceLength(s, i);
    if (ws > 0) {
      in_word = false;
      i += ws;
    } else {
      if (!in_word) ++words;
      in_word = true;
      ++i;
    }
  }
  return words;
}

std::size_t SkipBlanks(std::string_view line, std::size_t i) {
  while (i < line.size() && IsAsciiSpace(line[i])) ++i;
  return i;
}

// Returns the offset just past a list marker and its trailing whitespace, or
// npos when the line is not a list item.
std::size_t ListMarkerEnd(std::string_view line) {
  std::size_t i = SkipBlanks(line, 0);
  if (i >= line.size()) return std::string_view::npos;
  if (line[i] == '-' || line[i] == '*' || line[i] == '+') {
    ++i;
  } else if (std::isdigit(static_cast<unsigned char>(line[i]))) {
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i >= line.size() || (line[i] != '.' && line[i] != ')')) {
      return std::string_view::npos;
    }
    ++i;
  } else {
    return std::string_view::npos;
  }
  if (i >= line.size() || !IsAsciiSpace(line[i])) return std::string_view::npos;
  return SkipBlanks(line, i);
}

std::size_t HeaderMarkerEnd(std::string_view line) {
  std::size_t i = SkipBlanks(line, 0);
  std::size_t hashes = 0;
  while (i < line.size() && line[i] == '#') {
    ++i;
    ++hashes;
  }
  if (hashes == 0 || hashes > 6) return std::string_view::npos;
  if (i >= line.size() || !IsAsciiSpace(line[i])) return std::string_view::npos;
  return SkipBlanks(line, i);
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

int64_t CountEmphasis(std::string_view s) {
  int64_t spans = 0;
  std::size_t i = 0;
  const auto at = [&](std::size_t k) { return k < s.size() ? s[k] : '\0'; };
  while (i < s.size()) {
    const char c = s[i];
    if (c != '*' && c != '_') {
      ++i;
      continue;
    }
    const bool underscore = c == '_';
    if (underscore && i > 0 && IsWordChar(s[i - 1])) {
      ++i;
      continue;
    }
    if (at(i + 1) == c) {
      // Bold: **x** or __x__.
      const std::size_t open_end = i + 2;
      bool matched = false;
      if (open_end < s.size() && !IsAsciiSpace(s[open_end])) {
        for (std::size_t j = open_end + 1; j + 1 < s.size(); ++j) {
          if (s[j] == c && s[j + 1] == c && !IsAsciiSpace(s[j - 1]) &&
              !(underscore && IsWordChar(at(j + 2)))) {
            ++spans;
            i = j + 2;
            matched = true;
            break;
          }
        }
      }
      if (!matched) i += 2;
      continue;
    }
    // Italic: *x* or _x_.
    const std::size_t open_end = i + 1;
    bool matched = false;
    if (open_end < s.size() && !IsAsciiSpace(s[open_end])) {
      for (std::size_t j = open_end + 1; j < s.size(); ++j) {
        if (s[j] != c) continue;
        if (at(j + 1) == c) {
          ++j;  // part of a double delimiter, not a closer
          continue;
        }
        if (!IsAsciiSpace(s[j - 1]) && !(underscore && IsWordChar(at(j + 1)))) {
          ++spans;
          i = j + 1;
          matched = true;
        }
        break;
      }
    }
    if (!matched) ++i;
  }
  return spans;
}

bool InRange(const std::string& text, double limit) {
  const double v = std::strtod(text.c_str(), nullptr);
  return v >= -limit && v <= limit;
}

}  // namespace

bool ContainsGpsCoordinates(std::string_view text) {
  static const std::regex kPair(
      R"((-?\d{1,3}\.\d{2,})\s*(?:°)?\s*[NSns]?\s*,\s*(-?\d{1,3}\.\d{2,})\s*(?:°)?)");
  static const std::regex kLat(
      R"(\b(?:lat|latitude)\b\s*[:=]?\s*(-?\d{1,3}(?:\.\d+)?))",
      std::regex::icase);
  static const std::regex kLon(
      R"(\b(?:lon|long|lng|longitude)\b\s*[:=]?\s*(-?\d{1,3}(?:\.\d+)?))",
      std::regex::icase);

  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kPair);
       it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    const std::size_t start = static_cast<std::size_t>(m.position(0));
    // Reject matches that begin in the middle of a longer number.
    if (start > 0 && (std::isdigit(static_cast<unsigned char>(s[start - 1])) ||
                      s[start - 1] == '.')) {
      continue;
    }
    const std::size_t end = start + static_cast<std::size_t>(m.length(0));
    if (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) {
      continue;
    }
    if (InRange(m[1].str(), 90.0) && InRange(m[2].str(), 180.0)) return true;
  }

  std::smatch lat, lon;
  if (std::regex_search(s, lat, kLat) && std::regex_search(s, lon, kLon)) {
    return InRange(lat[1].str(), 90.0) && InRange(lon[1].str(), 180.0);
  }
  return false;
}

StyleFeatures ExtractFeatures(std::string_view response) {
  StyleFeatures f;
  f.response_length = CountWords(response);
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t nl = response.find('\n', pos);
    if (nl == std::string_view::npos) nl = response.size();
    std::string_view line = response.substr(pos, nl - pos);
    pos = nl + 1;

    std::size_t body = 0;
    if (const std::size_t list = ListMarkerEnd(line);
        list != std::string_view::npos) {
      ++f.lists_count;
      body = list;
    } else if (const std::size_t header = HeaderMarkerEnd(line);
               header != std::string_view::npos) {
      ++f.headers_count;
      body = header;
    }
    f.emphasis_count += CountEmphasis(line.substr(body));
  }
  f.has_gps_output = ContainsGpsCoordinates(response);
  return f;
}

namespace {

double NormalizedDifference(double a, double b) {
  const double sum = a + b;
  return sum == 0.0 ? 0.0 : (a - b) / sum;
}

}  // namespace

StyleVector FeatureDifference(const StyleFeatures& a, const StyleFeatures& b) {
  return {
      NormalizedDifference(static_cast<double>(a.response_length),
                           static_cast<double>(b.response_length)),
      NormalizedDifference(static_cast<double>(a.lists_count),
                           static_cast<double>(b.lists_count)),
      NormalizedDifference(static_cast<double>(a.headers_count),
                           static_cast<double>(b.headers_count)),
      NormalizedDifference(static_cast<double>(a.emphasis_count),
                           static_cast<double>(b.emphasis_count)),
      NormalizedDifference(a.has_gps_output ? 1.0 : 0.0,
                           b.has_gps_output ? 1.0 : 0.0),
  };
}

}  // namespace arena
