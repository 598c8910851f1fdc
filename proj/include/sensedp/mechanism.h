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

#ifndef SENSEDP_MECHANISM_H_
#define SENSEDP_MECHANISM_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sensedp/disambiguation.h"
#include "sensedp/embeddings.h"
#include "sensedp/random.h"
#include "sensedp/sense_induction.h"

namespace sensedp {

// Privacy budget meaning "no noise".
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct NoiseSpec {
  // Per-unit-distance privacy budget; +infinity disables noise.
  double epsilon = 1.0;
  size_t dim = 0;

  bool noiseless() const { return std::isinf(epsilon); }
  absl::Status Validate() const;
};

// Draws z with density proportional to exp(-epsilon * ||z||): a uniform
// direction on the unit sphere scaled by a Gamma(dim, 1/epsilon) radius.
// Returns the zero vector when the spec is noiseless.
std::vector<double> SampleNoise(const NoiseSpec& spec, Rng& rng);

enum class Mode { kWord, kSense };

std::string_view ModeName(Mode mode);
absl::StatusOr<Mode> ParseMode(std::string_view name);

struct PrivatizationRecord {
  std::string input;
  // Disambiguated sense of the input; set in sense mode only.
  std::optional<std::string> sense_id;
  std::string substitute;
  double noise_norm = 0.0;
  bool oov = false;
};

// The randomized substitution mechanism. In word mode the perturbed word
// vector is projected onto the nearest word vector. In sense mode the word is
// first disambiguated, its sense vector perturbed and projected onto the
// nearest sense vector of the whole inventory; the output is the word owning
// that sense. Projection uses exact Euclidean nearest neighbor search and
// always includes the input itself as a candidate.
//
// The store and inventory are borrowed and must outlive the mechanism.
class Mechanism {
 public:
  static absl::StatusOr<Mechanism> Create(
      const EmbeddingStore* store, const SenseInventory* inventory = nullptr);

  const EmbeddingStore& store() const { return *store_; }
  const SenseInventory* inventory() const { return inventory_; }
  size_t dim() const { return store_->dim(); }

  // True when `word` can be privatized (rather than passed through) in `mode`.
  bool Knows(std::string_view word, Mode mode) const;

  absl::StatusOr<PrivatizationRecord> PrivatizeWord(
      std::string_view word, const std::optional<ContextWindow>& context,
      Mode mode, const NoiseSpec& spec, Rng& rng) const;

  // Same as PrivatizeWord with the context already reduced to its centroid.
  absl::StatusOr<PrivatizationRecord> PrivatizeWithCentroid(
      std::string_view word, const std::optional<std::vector<double>>& centroid,
      Mode mode, const NoiseSpec& spec, Rng& rng) const;

  // Privatizes every token independently. Token i draws from the sub-stream
  // (seed, stream, i), so results do not depend on `threads`. Contexts come
  // from the original sequence. Unknown tokens are copied and flagged oov.
  absl::StatusOr<std::vector<PrivatizationRecord>> PrivatizeText(
      std::span<const std::string> tokens, Mode mode, double epsilon,
      size_t window, uint64_t seed, uint64_t stream = 0,
      int threads = 1) const;

 private:
  Mechanism(const EmbeddingStore* store, const SenseInventory* inventory,
            std::optional<EmbeddingStore> sense_space)
      : store_(store),
        inventory_(inventory),
        sense_space_(std::move(sense_space)) {}

  const EmbeddingStore* store_;
  const SenseInventory* inventory_;
  // Sense vectors keyed by sense id, row-aligned with inventory->senses().
  std::optional<EmbeddingStore> sense_space_;
};

}  // namespace sensedp

#endif  // SENSEDP_MECHANISM_H_
