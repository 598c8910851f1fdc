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

#include "sensedp/disambiguation.h"

#include <algorithm>

#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp {

absl::StatusOr<ContextWindow> ExtractWindow(std::span<const std::string> tokens,
                                            size_t index, size_t window) {
  if (index >= tokens.size()) {
    return MakeError(ErrorKind::kIndexOutOfRange,
                     StrCat(index, " not in [0, ", tokens.size(), ")"));
  }
  ContextWindow ctx;
  ctx.center = tokens[index];
  ctx.window = window;
  const size_t begin = index > window ? index - window : 0;
  const size_t end = std::min(tokens.size(), index + window + 1);
  ctx.left.assign(tokens.begin() + begin, tokens.begin() + index);
  ctx.right.assign(tokens.begin() + index + 1, tokens.begin() + end);
  return ctx;
}

std::optional<std::vector<double>> ContextCentroid(
    const EmbeddingStore& store, const ContextWindow& window) {
  std::vector<double> sum(store.dim(), 0.0);
  size_t known = 0;
  auto add = [&](const std::vector<std::string>& side) {
    for (const std::string& token : side) {
      auto row = store.IndexOf(token);
      if (!row) continue;
      const auto v = store.Row(*row);
      for (size_t j = 0; j < sum.size(); ++j) sum[j] += v[j];
      ++known;
    }
  };
  add(window.left);
  add(window.right);
  if (known == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(known);
  return sum;
}

absl::StatusOr<const SenseEntry*> Disambiguate(
    const SenseInventory& inventory, std::string_view word,
    const std::optional<std::vector<double>>& centroid) {
  const auto senses = inventory.SensesOf(word);
  if (senses.empty()) return MakeError(ErrorKind::kUnknownWord, word);
  if (!centroid || senses.size() == 1) return &senses[0];
  if (centroid->size() != inventory.dim()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     StrCat("found ", centroid->size(), ", expected ",
                                  inventory.dim()));
  }
  size_t best = 0;
  double best_sim = CosineSimilarity(*centroid, senses[0].vector);
  for (size_t i = 1; i < senses.size(); ++i) {
    const double sim = CosineSimilarity(*centroid, senses[i].vector);
    if (sim > best_sim) {
      best = i;
      best_sim = sim;
    }
  }
  return &senses[best];
}

}  // namespace sensedp
