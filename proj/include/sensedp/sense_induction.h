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

#ifndef SENSEDP_SENSE_INDUCTION_H_
#define SENSEDP_SENSE_INDUCTION_H_

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
#include "sensedp/embeddings.h"
#include "sensedp/strings.h"

namespace sensedp {

struct InductionParams {
  // Number of cosine nearest neighbors forming each ego network.
  size_t neighborhood_size = 200;
  // A node links to its edge_top_k most similar nodes inside the ego set.
  size_t edge_top_k = 10;
  int cw_iterations = 20;
  size_t min_cluster_size = 5;
  uint64_t seed = 0;

  absl::Status Validate() const;
};

struct WeightedEdge {
  size_t u;
  size_t v;
  double weight;
};

// Neighborhood graph of one word. The ego itself is not a node; edges are
// undirected (u < v) and weighted by the cosine similarity of the endpoints.
struct EgoNetwork {
  std::string ego;
  std::vector<std::string> nodes;
  std::vector<WeightedEdge> edges;
};

absl::StatusOr<EgoNetwork> BuildEgoNetwork(const EmbeddingStore& store,
                                           std::string_view word,
                                           const InductionParams& params);

// Chinese Whispers label propagation. Returns one label per node; labels are
// node indices of the initial singleton clusters. Visiting order is reshuffled
// every round from `seed`. Each node adopts the neighboring label with the
// largest summed edge weight (smallest label on ties); a node keeps its label
// when no neighboring label has positive weight. Stops early once a round
// leaves every label unchanged.
std::vector<size_t> ChineseWhispers(size_t num_nodes,
                                    std::span<const WeightedEdge> edges,
                                    int iterations, uint64_t seed);

inline std::vector<size_t> ChineseWhispers(const EgoNetwork& graph,
                                           int iterations, uint64_t seed) {
  return ChineseWhispers(graph.nodes.size(), graph.edges, iterations, seed);
}

struct PooledSense {
  std::vector<double> vector;
  // Pooling weight per member: cosine to the ego, clamped at zero.
  std::vector<double> weights;
};

// Weighted mean of member vectors, weighted by (clamped) cosine similarity to
// the ego. Falls back to the unweighted mean when every weight is zero.
absl::StatusOr<PooledSense> PoolSenseVector(const EmbeddingStore& store,
                                            std::string_view ego,
                                            std::span<const std::string> members);

struct SenseMember {
  std::string token;
  // Cosine similarity between the member and the ego word.
  double weight;
};

struct SenseEntry {
  std::string word;
  std::string sense_id;
  std::vector<double> vector;
  std::vector<SenseMember> members;
};

std::string MakeSenseId(std::string_view word, size_t k);

// Immutable word -> senses table. Senses of one word are contiguous and
// numbered word#0, word#1, ... with word#0 the largest cluster.
class SenseInventory {
 public:
  static absl::StatusOr<SenseInventory> Create(std::vector<SenseEntry> senses);

  size_t dim() const { return dim_; }
  size_t num_senses() const { return senses_.size(); }
  size_t num_words() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<SenseEntry>& senses() const { return senses_; }

  bool Contains(std::string_view word) const {
    return ranges_.contains(word);
  }

  // Senses of `word`; empty when unknown.
  std::span<const SenseEntry> SensesOf(std::string_view word) const;

  // Offset of the word's first sense within senses().
  std::optional<size_t> FirstSenseIndex(std::string_view word) const;

 private:
  struct Range {
    size_t begin;
    size_t count;
  };

  SenseInventory() = default;

  std::vector<SenseEntry> senses_;
  std::vector<std::string> words_;
  StringMap<Range> ranges_;
  size_t dim_ = 0;
};

// Builds an ego network per word, clusters it, drops clusters smaller than
// min_cluster_size and pools one sense per surviving cluster. Words without a
// surviving cluster receive one sense equal to their own vector.
absl::StatusOr<SenseInventory> InduceInventory(const EmbeddingStore& store,
                                               const InductionParams& params,
                                               int threads = 1);

// JSON Lines, one sense per line:
// {"word":..,"sense_id":..,"vector":[..],"members":[[token,weight],..]}
void WriteInventory(const SenseInventory& inventory, std::ostream& out);
absl::StatusOr<SenseInventory> ReadInventory(std::istream& in);
absl::Status SaveInventory(const SenseInventory& inventory,
                           const std::string& path);
absl::StatusOr<SenseInventory> LoadInventory(const std::string& path);

struct SenseDistanceRow {
  size_t num_senses;
  size_t num_words;
  // Mean over words of the mean pairwise Euclidean distance between senses.
  double mean_distance;
};

struct SenseDistanceStats {
  std::vector<SenseDistanceRow> rows;
  // Mean pairwise distance between word vectors, for comparison.
  double baseline;
};

absl::StatusOr<SenseDistanceStats> WithinSenseDistanceStats(
    const SenseInventory& inventory, const EmbeddingStore& store,
    size_t baseline_sample, uint64_t seed);

}  // namespace sensedp

#endif  // SENSEDP_SENSE_INDUCTION_H_
