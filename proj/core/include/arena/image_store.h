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

#ifndef ARENA_IMAGE_STORE_H_
#define ARENA_IMAGE_STORE_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "arena/model.h"

namespace arena {

enum class MediaType { kJpeg, kPng, kWebp };

std::string_view MediaTypeMime(MediaType type);
std::string_view MediaTypeExtension(MediaType type);
absl::StatusOr<MediaType> MediaTypeFromMime(std::string_view mime);
// Identifies the format from magic bytes.
absl::StatusOr<MediaType> SniffMediaType(std::string_view bytes);

// A valid 1x1 PNG used where a battle has no real image (synthetic logs).
std::string_view PlaceholderPng();
ImageRef PlaceholderImageRef();

// Lowercase hex SHA-256 of `bytes`.
std::string Sha256Hex(std::string_view bytes);

// Hook applied to uploads before they are stored. Returns the bytes to keep.
using ImageFilter =
    std::function<absl::StatusOr<std::string>(std::string_view, MediaType)>;

// Removes EXIF metadata: APP1 "Exif" segments from JPEG, eXIf chunks from
// PNG and EXIF chunks from WebP. Other bytes are preserved.
absl::StatusOr<std::string> StripExif(std::string_view bytes, MediaType type);

// Directory of raw image bytes named by content hash:
//   <root>/<first two hex chars>/<sha256>.<ext>
class ImageStore {
 public:
  explicit ImageStore(std::filesystem::path root, ImageFilter filter = StripExif);

  // Filters, hashes and stores the image. Storing identical bytes twice is a
  // no-op returning the same reference.
  absl::StatusOr<ImageRef> Put(std::string_view bytes, MediaType type) const;

  // Reads the image back and verifies its digest.
  absl::StatusOr<std::string> Get(const ImageRef& ref) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  ImageFilter filter_;
};

}  // namespace arena

#endif  // ARENA_IMAGE_STORE_H_
