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

#include "arena/image_store.h"

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <memory>
#include <system_error>

#include "absl/strings/ascii.h"
#include "arena/format.h"

namespace arena {

std::string_view MediaTypeMime(MediaType type) {
  switch (type) {
    case MediaType::kJpeg:
      return "image/jpeg";
    case MediaType::kPng:
      return "image/png";
    case MediaType::kWebp:
      return "image/webp";
  }
  return "application/octet-stream";
}

std::string_view MediaTypeExtension(MediaType type) {
  switch (type) {
    case MediaType::kJpeg:
      return "jpg";
    case MediaType::kPng:
      return "png";
    case MediaType::kWebp:
      return "webp";
  }
  return "bin";
}

absl::StatusOr<MediaType> MediaTypeFromMime(std::string_view mime) {
  const std::string m = absl::AsciiStrToLower(std::string(mime));
  if (m == "image/jpeg" || m == "image/jpg" || m == "jpeg" || m == "jpg") {
    return MediaType::kJpeg;
  }
  if (m == "image/png" || m == "png") return MediaType::kPng;
  if (m == "image/webp" || m == "webp") return MediaType::kWebp;
  return absl::InvalidArgumentError(
      fmt::format("unsupported media type '{}'", mime));
}

absl::StatusOr<MediaType> SniffMediaType(std::string_view bytes) {
  if (bytes.size() >= 3 && static_cast<uint8_t>(bytes[0]) == 0xFF &&
      static_cast<uint8_t>(bytes[1]) == 0xD8 &&
      static_cast<uint8_t>(bytes[2]) == 0xFF) {
    return MediaType::kJpeg;
  }
  if (bytes.size() >= 8 && bytes.substr(0, 8) == "\x89PNG\r\n\x1a\n") {
    return MediaType::kPng;
  }
  if (bytes.size() >= 12 && bytes.substr(0, 4) == "RIFF" &&
      bytes.substr(8, 4) == "WEBP") {
    return MediaType::kWebp;
  }
  return absl::InvalidArgumentError("unrecognized image format");
}

std::string_view PlaceholderPng() {
  static constexpr unsigned char kBytes[] = {
      0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D,
      0x49, 0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01,
      0x08, 0x06, 0x00, 0x00, 0x00, 0x1F, 0x15, 0xC4, 0x89, 0x00, 0x00, 0x00,
      0x0A, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0x00, 0x01, 0x00, 0x00,
      0x05, 0x00, 0x01, 0x0D, 0x0A, 0x2D, 0xB4, 0x00, 0x00, 0x00, 0x00, 0x49,
      0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};
  return std::string_view(reinterpret_cast<const char*>(kBytes), sizeof(kBytes));
}

ImageRef PlaceholderImageRef() {
  return ImageRef{Sha256Hex(PlaceholderPng()), "placeholder.png"};
}

std::string Sha256Hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(),
             nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

uint32_t ReadBe32(std::string_view s, std::size_t at) {
  return (uint32_t{static_cast<uint8_t>(s[at])} << 24) |
         (uint32_t{static_cast<uint8_t>(s[at + 1])} << 16) |
         (uint32_t{static_cast<uint8_t>(s[at + 2])} << 8) |
         uint32_t{static_cast<uint8_t>(s[at + 3])};
}

uint32_t ReadLe32(std::string_view s, std::size_t at) {
  return uint32_t{static_cast<uint8_t>(s[at])} |
         (uint32_t{static_cast<uint8_t>(s[at + 1])} << 8) |
         (uint32_t{static_cast<uint8_t>(s[at + 2])} << 16) |
         (uint32_t{static_cast<uint8_t>(s[at + 3])} << 24);
}

void WriteLe32(std::string& s, std::size_t at, uint32_t v) {
  for (int i = 0; i < 4; ++i) s[at + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

absl::StatusOr<std::string> StripJpegExif(std::string_view in) {
  std::string out(in.substr(0, 2));  // SOI
  std::size_t pos = 2;
  while (pos + 4 <= in.size()) {
    if (static_cast<uint8_t>(in[pos]) != 0xFF) {
      return absl::InvalidArgumentError("corrupt JPEG segment marker");
    }
    const uint8_t marker = static_cast<uint8_t>(in[pos + 1]);
    // Start of scan: the rest is entropy-coded data.
    if (marker == 0xDA) break;
    // Standalone markers carry no length.
    if (marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
      out.append(in.substr(pos, 2));
      pos += 2;
      continue;
    }
    const std::size_t len = (std::size_t{static_cast<uint8_t>(in[pos + 2])} << 8) |
                            static_cast<uint8_t>(in[pos + 3]);
    if (len < 2 || pos + 2 + len > in.size()) {
      return absl::InvalidArgumentError("truncated JPEG segment");
    }
    const std::string_view payload = in.substr(pos + 4, len - 2);
    const bool is_exif =
        marker == 0xE1 && payload.substr(0, 6) == std::string_view("Exif\0\0", 6);
    if (!is_exif) out.append(in.substr(pos, 2 + len));
    pos += 2 + len;
  }
  out.append(in.substr(std::min(pos, in.size())));
  return out;
}

absl::StatusOr<std::string> StripPngExif(std::string_view in) {
  std::string out(in.substr(0, 8));
  std::size_t pos = 8;
  while (pos + 12 <= in.size()) {
    const std::size_t len = ReadBe32(in, pos);
    if (pos + 12 + len > in.size()) {
      return absl::InvalidArgumentError("truncated PNG chunk");
    }
    const std::string_view type = in.substr(pos + 4, 4);
    if (type != "eXIf") out.append(in.substr(pos, 12 + len));
    pos += 12 + len;
  }
  out.append(in.substr(std::min(pos, in.size())));
  return out;
}

absl::StatusOr<std::string> StripWebpExif(std::string_view in) {
  std::string out(in.substr(0, 12));
  std::size_t pos = 12;
  std::size_t vp8x_flags_at = std::string::npos;
  while (pos + 8 <= in.size()) {
    const std::size_t len = ReadLe32(in, pos + 4);
    const std::size_t padded = len + (len & 1);
    if (pos + 8 + padded > in.size()) {
      return absl::InvalidArgumentError("truncated WebP chunk");
    }
    const std::string_view fourcc = in.substr(pos, 4);
    if (fourcc != "EXIF") {
      if (fourcc == "VP8X") vp8x_flags_at = out.size() + 8;
      out.append(in.substr(pos, 8 + padded));
    }
    pos += 8 + padded;
  }
  out.append(in.substr(std::min(pos, in.size())));
  // Clear the EXIF-present flag (bit 3) and fix the RIFF size.
  if (vp8x_flags_at != std::string::npos && vp8x_flags_at < out.size()) {
    out[vp8x_flags_at] = static_cast<char>(out[vp8x_flags_at] & ~0x08);
  }
  WriteLe32(out, 4, static_cast<uint32_t>(out.size() - 8));
  return out;
}

}  // namespace

absl::StatusOr<std::string> StripExif(std::string_view bytes, MediaType type) {
  auto sniffed = SniffMediaType(bytes);
  if (!sniffed.ok()) return sniffed.status();
  if (*sniffed != type) {
    return absl::InvalidArgumentError(
        fmt::format("declared {} but bytes look like {}", MediaTypeMime(type), MediaTypeMime(*sniffed)));
  }
  switch (type) {
    case MediaType::kJpeg:
      return StripJpegExif(bytes);
    case MediaType::kPng:
      return StripPngExif(bytes);
    case MediaType::kWebp:
      return StripWebpExif(bytes);
  }
  return std::string(bytes);
}

ImageStore::ImageStore(std::filesystem::path root, ImageFilter filter)
    : root_(std::move(root)), filter_(std::move(filter)) {}

absl::StatusOr<ImageRef> ImageStore::Put(std::string_view bytes,
                                         MediaType type) const {
  if (bytes.empty()) return absl::InvalidArgumentError("image is empty");
  std::string kept(bytes);
  if (filter_) {
    auto filtered = filter_(bytes, type);
    if (!filtered.ok()) return filtered.status();
    kept = *std::move(filtered);
  }
  ImageRef ref;
  ref.sha256 = Sha256Hex(kept);
  ref.filename =
      fmt::format("{}/{}.{}", ref.sha256.substr(0, 2), ref.sha256, MediaTypeExtension(type));
  const std::filesystem::path full = root_ / ref.filename;
  std::error_code ec;
  if (std::filesystem::exists(full, ec)) return ref;
  std::filesystem::create_directories(full.parent_path(), ec);
  if (ec) {
    return absl::UnavailableError(
        fmt::format("cannot create {}: {}", full.parent_path().string(), ec.message()));
  }
  // Write to a temporary name and rename so readers never see partial files.
  const std::filesystem::path tmp = full.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(kept.data(), static_cast<std::streamsize>(kept.size()));
    if (!out) {
      return absl::UnavailableError(
          fmt::format("cannot write {}", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, full, ec);
  if (ec) {
    return absl::UnavailableError(
        fmt::format("cannot rename into {}: {}", full.string(), ec.message()));
  }
  return ref;
}

absl::StatusOr<std::string> ImageStore::Get(const ImageRef& ref) const {
  const std::filesystem::path full = root_ / ref.filename;
  std::ifstream in(full, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(fmt::format("image {} not found", full.string()));
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (Sha256Hex(bytes) != ref.sha256) {
    return absl::DataLossError(
        fmt::format("image {} does not match its digest", full.string()));
  }
  return bytes;
}

}  // namespace arena
