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

#ifndef SENSEDP_EMBEDDINGS_H_
#define SENSEDP_EMBEDDINGS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sensedp/strings.h"

namespace sensedp {

enum class DistanceMetric { kEuclidean, kCosine };

double EuclideanDistance(std::span<const double> a, std::span<const double> b);

// Cosine similarity; 0 when either vector has zero norm.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Euclidean: L2 norm of a - b. Cosine: 1 - CosineSimilarity(a, b).
double Distance(std::span<const double> a, std::span<const double> b,
                DistanceMetric metric);

// Immutable token -> vector table. Rows are stored contiguously in load
// order. Every component is finite; tokens are unique and
// non-empty. Safe for concurrent reads.
class EmbeddingStore {
 public:
  // `matrix` is row-major with tokens.size() rows of `dim` columns.
  static absl::StatusOr<EmbeddingStore> Create(std::vector<std::string> tokens,
                                               std::vector<double> matrix,
                                               size_t dim);

  static absl::StatusOr<EmbeddingStore> FromRows(
      const std::vector<std::pair<std::string, std::vector<double>>>& rows);

  size_t size() const { return tokens_.size(); }
  size_t dim() const { return dim_; }
  bool empty() const { return tokens_.empty(); }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(size_t row) const { return tokens_[row]; }

  std::optional<size_t> IndexOf(std::string_view token) const;
  bool Contains(std::string_view token) const {
    return index_.contains(token);
  }

  std::span<const double> Row(size_t row) const {
    return {matrix_.data() + row * dim_, dim_};
  }

  absl::StatusOr<std::span<const double>> Lookup(std::string_view token) const;

 private:
  EmbeddingStore(std::vector<std::string> tokens, std::vector<double> matrix,
                 size_t dim);

  std::vector<std::string> tokens_;
  std::vector<double> matrix_;
  size_t dim_ = 0;
  StringMap<size_t> index_;
};

// Parses word2vec text format: an optional "<count> <dim>" header followed by
// one "<token> <f1> ... <fd>" line per word.
absl::StatusOr<EmbeddingStore> ParseEmbedding(
    std::istream& in, std::optional<size_t> expected_dim = std::nullopt);

absl::StatusOr<EmbeddingStore> LoadEmbedding(
    const std::string& path, std::optional<size_t> expected_dim = std::nullopt);

// Writes the store in word2vec text format with a header line. Values are
// printed in shortest round-trip form.
void WriteEmbedding(const EmbeddingStore& store, std::ostream& out);

absl::StatusOr<double> Distance(const EmbeddingStore& store, std::string_view u,
                                std::string_view v, DistanceMetric metric);

struct Neighbor {
  size_t index;
  std::string token;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Exact linear scan. Results ascend by distance; equal distances are ordered
// by ascending token string.
absl::StatusOr<std::vector<Neighbor>> Nearest(const EmbeddingStore& store,
                                              std::span<const double> query,
                                              size_t k, DistanceMetric metric);

// Row index of the single nearest token, with the same ordering rule as
// Nearest. The store must be non-empty and `query` must have store.dim()
// components.
size_t NearestRow(const EmbeddingStore& store, std::span<const double> query,
                  DistanceMetric metric);

// Mean Euclidean distance over all unordered pairs of a uniform sample of
// `sample_size` distinct tokens drawn with `seed`.
absl::StatusOr<double> MeanPairwiseDistance(const EmbeddingStore& store,
                                            size_t sample_size, uint64_t seed);

}  // namespace sensedp

#endif  // SENSEDP_EMBEDDINGS_H_
