// Copyright 2026 The sensedp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SENSEDP_DISAMBIGUATION_H_
#define SENSEDP_DISAMBIGUATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "sensedp/embeddings.h"
#include "sensedp/sense_induction.h"

namespace sensedp {

inline constexpr size_t kDefaultWindow = 5;

struct ContextWindow {
  std::string center;
  std::vector<std::string> left;
  std::vector<std::string> right;
  size_t window = kDefaultWindow;
};

// Up to `window` tokens either side of tokens[index], clipped at the sequence
// boundaries. The center token is not part of the context.
absl::StatusOr<ContextWindow> ExtractWindow(std::span<const std::string> tokens,
                                            size_t index,
                                            size_t window = kDefaultWindow);

// Mean vector of the in-vocabulary context tokens; nullopt when none is known.
std::optional<std::vector<double>> ContextCentroid(const EmbeddingStore& store,
                                                   const ContextWindow& window);

// Picks the sense of `word` whose vector has the highest cosine similarity to
// the centroid. Without a centroid, or on ties, the word's first sense wins.
// The returned pointer refers into `inventory`.
absl::StatusOr<const SenseEntry*> Disambiguate(
    const SenseInventory& inventory, std::string_view word,
    const std::optional<std::vector<double>>& centroid);

}  // namespace sensedp

#endif  // SENSEDP_DISAMBIGUATION_H_
