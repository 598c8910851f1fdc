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

#include "sensedp/mechanism.h"

#include <utility>

#include "sensedp/parallel.h"
#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp {

absl::Status NoiseSpec::Validate() const {
  if (!(epsilon > 0.0)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     StrCat("epsilon must be positive, got ", epsilon));
  }
  if (dim == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "dimension must be positive");
  }
  return absl::OkStatus();
}

std::vector<double> SampleNoise(const NoiseSpec& spec, Rng& rng) {
  std::vector<double> z(spec.dim, 0.0);
  if (spec.noiseless()) return z;
  std::normal_distribution<double> normal;
  double norm2 = 0.0;
  while (norm2 == 0.0) {
    for (double& x : z) {
      x = normal(rng);
      norm2 += x * x;
    }
  }
  std::gamma_distribution<double> radius(static_cast<double>(spec.dim),
                                         1.0 / spec.epsilon);
  const double scale = radius(rng) / std::sqrt(norm2);
  for (double& x : z) x *= scale;
  return z;
}

std::string_view ModeName(Mode mode) {
  return mode == Mode::kWord ? "word" : "sense";
}

absl::StatusOr<Mode> ParseMode(std::string_view name) {
  if (name == "word") return Mode::kWord;
  if (name == "sense") return Mode::kSense;
  return MakeError(ErrorKind::kInvalidArgument,
                   StrCat("unknown mode '", name, "'"));
}

absl::StatusOr<Mechanism> Mechanism::Create(const EmbeddingStore* store,
                                            const SenseInventory* inventory) {
  if (store == nullptr || store->empty()) {
    return MakeError(ErrorKind::kEmptyStore, "mechanism needs an embedding");
  }
  std::optional<EmbeddingStore> sense_space;
  if (inventory != nullptr) {
    if (inventory->dim() != store->dim()) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       StrCat("found ", inventory->dim(), ", expected ",
                                    store->dim(), " (inventory)"));
    }
    std::vector<std::string> ids;
    std::vector<double> matrix;
    ids.reserve(inventory->num_senses());
    matrix.reserve(inventory->num_senses() * inventory->dim());
    for (const SenseEntry& s : inventory->senses()) {
      ids.push_back(s.sense_id);
      matrix.insert(matrix.end(), s.vector.begin(), s.vector.end());
    }
    SENSEDP_ASSIGN_OR_RETURN(
        sense_space,
        EmbeddingStore::Create(std::move(ids), std::move(matrix),
                               inventory->dim()));
  }
  return Mechanism(store, inventory, std::move(sense_space));
}

bool Mechanism::Knows(std::string_view word, Mode mode) const {
  if (mode == Mode::kWord) return store_->Contains(word);
  return inventory_ != nullptr && inventory_->Contains(word);
}

absl::StatusOr<PrivatizationRecord> Mechanism::PrivatizeWord(
    std::string_view word, const std::optional<ContextWindow>& context,
    Mode mode, const NoiseSpec& spec, Rng& rng) const {
  std::optional<std::vector<double>> centroid;
  if (mode == Mode::kSense && context) {
    centroid = ContextCentroid(*store_, *context);
  }
  return PrivatizeWithCentroid(word, centroid, mode, spec, rng);
}

absl::StatusOr<PrivatizationRecord> Mechanism::PrivatizeWithCentroid(
    std::string_view word, const std::optional<std::vector<double>>& centroid,
    Mode mode, const NoiseSpec& spec, Rng& rng) const {
  SENSEDP_RETURN_IF_ERROR(spec.Validate());
  if (spec.dim != store_->dim()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     StrCat("found ", spec.dim, ", expected ",
                                  store_->dim(), " (noise)"));
  }
  PrivatizationRecord record;
  record.input = std::string(word);

  std::span<const double> origin;
  const EmbeddingStore* space = store_;
  if (mode == Mode::kWord) {
    SENSEDP_ASSIGN_OR_RETURN(origin, store_->Lookup(word));
  } else {
    if (inventory_ == nullptr) {
      return MakeError(ErrorKind::kMissingInventory,
                       "sense mode requires a sense inventory");
    }
    auto sense = Disambiguate(*inventory_, word, centroid);
    if (!sense.ok()) return MakeError(ErrorKind::kUnknownToken, word);
    record.sense_id = (*sense)->sense_id;
    origin = (*sense)->vector;
    space = &*sense_space_;
  }

  std::vector<double> noisy = SampleNoise(spec, rng);
  double norm2 = 0.0;
  for (size_t j = 0; j < noisy.size(); ++j) {
    norm2 += noisy[j] * noisy[j];
    noisy[j] += origin[j];
  }
  record.noise_norm = std::sqrt(norm2);

  const size_t row = NearestRow(*space, noisy, DistanceMetric::kEuclidean);
  record.substitute = mode == Mode::kWord ? store_->token(row)
                                          : inventory_->senses()[row].word;
  return record;
}

absl::StatusOr<std::vector<PrivatizationRecord>> Mechanism::PrivatizeText(
    std::span<const std::string> tokens, Mode mode, double epsilon,
    size_t window, uint64_t seed, uint64_t stream, int threads) const {
  if (tokens.empty()) return MakeError(ErrorKind::kEmptyInput, "no tokens");
  if (mode == Mode::kSense && inventory_ == nullptr) {
    return MakeError(ErrorKind::kMissingInventory,
                     "sense mode requires a sense inventory");
  }
  const NoiseSpec spec{epsilon, store_->dim()};
  SENSEDP_RETURN_IF_ERROR(spec.Validate());
  std::vector<absl::StatusOr<PrivatizationRecord>> results(
      tokens.size(), PrivatizationRecord{});
  ParallelFor(tokens.size(), threads, [&](size_t i) {
    if (!Knows(tokens[i], mode)) {
      PrivatizationRecord record;
      record.input = tokens[i];
      record.substitute = tokens[i];
      record.oov = true;
      results[i] = std::move(record);
      return;
    }
    Rng rng = SubstreamRng(seed, {stream, i});
    std::optional<ContextWindow> context;
    if (mode == Mode::kSense) {
      auto extracted = ExtractWindow(tokens, i, window);
      if (!extracted.ok()) {
        results[i] = extracted.status();
        return;
      }
      context = *std::move(extracted);
    }
    results[i] = PrivatizeWord(tokens[i], context, mode, spec, rng);
  });
  std::vector<PrivatizationRecord> records;
  records.reserve(tokens.size());
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    records.push_back(*std::move(r));
  }
  return records;
}

}  // namespace sensedp
