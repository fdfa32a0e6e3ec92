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

#include "arena/registry.h"

#include <algorithm>

#include "arena/format.h"

namespace arena {

absl::Status ModelRegistry::Add(RegistryEntry entry) {
  if (Find(entry.id) != nullptr) {
    return absl::AlreadyExistsError(
        fmt::format("model {} registered twice", entry.id.canonical()));
  }
  entries_.push_back(std::move(entry));
  return absl::OkStatus();
}

const RegistryEntry* ModelRegistry::Find(const ModelId& id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const RegistryEntry& e) { return e.id == id; });
  return it == entries_.end() ? nullptr : &*it;
}

bool ModelRegistry::IsActive(const ModelId& id) const {
  const RegistryEntry* e = Find(id);
  return e != nullptr && e->active;
}

std::vector<ModelId> ModelRegistry::ActiveModels() const {
  std::vector<ModelId> out;
  for (const RegistryEntry& e : entries_) {
    if (e.active) out.push_back(e.id);
  }
  return out;
}

ModelRegistry DefaultRegistry() {
  struct Row {
    const char* id;
    const char* display;
    bool open;
  };
  static constexpr Row kRows[] = {
      {"openai/gpt-4o", "GPT-4o", false},
      {"openai/gpt-4o-mini", "GPT-4o-mini", false},
      {"openai/gpt-4.1", "GPT-4.1", false},
      {"openai/gpt-4.1-mini", "GPT-4.1-mini", false},
      {"openai/gpt-4.1-nano", "GPT-4.1 Nano", false},
      {"google/gemini-2.5-flash", "Gemini 2.5 Flash", false},
      {"google/gemini-2.5-pro", "Gemini 2.5 Pro", false},
      {"anthropic/claude-sonnet-4", "Claude Sonnet 4", false},
      {"anthropic/claude-opus-4", "Claude Opus 4", false},
      {"meta-llama/llama-4-maverick", "Llama 4 Maverick", true},
      {"meta-llama/llama-4-scout", "Llama 4 Scout", true},
      {"google/gemma-3-27b-it", "Gemma 3 27B", true},
      {"google/gemma-3-12b-it", "Gemma 3 12B", true},
      {"google/gemma-3-4b-it", "Gemma 3 4B", true},
      {"qwen/qwen2.5-vl-72b-instruct", "Qwen 2.5-VL 72B", true},
      {"qwen/qwen2.5-vl-32b-instruct", "Qwen 2.5-VL 32B", true},
      {"qwen/qwen-2.5-vl-7b-instruct", "Qwen 2.5-VL 7B", true},
  };
  ModelRegistry registry;
  for (const Row& row : kRows) {
    (void)registry.Add({MustParseModelId(row.id), row.display, row.open, true});
  }
  return registry;
}

}  // namespace arena
