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

#ifndef ARENA_REGISTRY_H_
#define ARENA_REGISTRY_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "arena/model.h"

namespace arena {

struct RegistryEntry {
  ModelId id;
  std::string display_name;
  bool open_source = false;
  bool active = true;
};

// The set of models known to an arena deployment.
class ModelRegistry {
 public:
  ModelRegistry() = default;

  // Fails with AlreadyExists when the id is already registered.
  absl::Status Add(RegistryEntry entry);

  const RegistryEntry* Find(const ModelId& id) const;
  bool IsActive(const ModelId& id) const;

  const std::vector<RegistryEntry>& entries() const { return entries_; }
  std::vector<ModelId> ActiveModels() const;

 private:
  std::vector<RegistryEntry> entries_;
};

// The seventeen-model roster used by the public deployment.
ModelRegistry DefaultRegistry();

}  // namespace arena

#endif  // ARENA_REGISTRY_H_
