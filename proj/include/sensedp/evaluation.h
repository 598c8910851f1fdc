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

#ifndef SENSEDP_EVALUATION_H_
#define SENSEDP_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sensedp/embeddings.h"
#include "sensedp/mechanism.h"

namespace sensedp {

// Ranks starting at 1; tied values share the mean of their positions.
std::vector<double> FractionalRanks(std::span<const double> values);

double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y);

// Spearman rank correlation: Pearson correlation of fractional ranks.
absl::StatusOr<double> Spearman(std::span<const double> x,
                                std::span<const double> y);

struct WordPair {
  std::string word1;
  std::string word2;
  double gold;
};

struct ContextPair {
  std::string word1;
  std::string word2;
  std::vector<std::string> context1;
  std::vector<std::string> context2;
  bool same_meaning;
};

// TSV "word1<TAB>word2<TAB>score".
absl::StatusOr<std::vector<WordPair>> ReadWordPairs(std::istream& in);
absl::StatusOr<std::vector<WordPair>> LoadWordPairs(const std::string& path);

// TSV "word1<TAB>word2<TAB>context1<TAB>context2<TAB>label", label T or F,
// contexts tokenized on whitespace. Each word must occur in its context.
absl::StatusOr<std::vector<ContextPair>> ReadContextPairs(std::istream& in);
absl::StatusOr<std::vector<ContextPair>> LoadContextPairs(
    const std::string& path);

struct EvalOptions {
  Mode mode = Mode::kWord;
  double epsilon = 1.0;
  size_t queries = 25;
  uint64_t seed = 0;
  size_t window = 5;
  int threads = 1;
  // Space in which substitute similarity is measured; defaults to the
  // mechanism's own embedding.
  const EmbeddingStore* reference = nullptr;
};

// One privatized query of a dataset row.
struct QuerySample {
  size_t row;
  size_t query;
  std::string substitute1;
  std::string substitute2;
  // Cosine of the substitutes' reference vectors; nullopt when a substitute
  // is missing from the reference embedding.
  std::optional<double> similarity;
};

struct WordPairResult {
  double spearman = 0.0;
  // Dataset rows that were evaluated, with their mean substitute similarity.
  std::vector<size_t> rows;
  std::vector<double> pair_scores;
  size_t skipped_rows = 0;
  std::vector<QuerySample> samples;
};

absl::StatusOr<WordPairResult> EvalWordPairs(
    std::span<const WordPair> dataset, const Mechanism& mechanism,
    const EvalOptions& options);

struct ContextPairResult {
  std::optional<double> mean_same;
  std::optional<double> mean_diff;
  // Samples dropped because both substitutes have similarity one.
  size_t excluded = 0;
  size_t skipped_rows = 0;
  std::vector<double> same_samples;
  std::vector<double> diff_samples;
  std::vector<QuerySample> samples;
};

absl::StatusOr<ContextPairResult> EvalContextPairs(
    std::span<const ContextPair> dataset, const Mechanism& mechanism,
    const EvalOptions& options);

struct Interval {
  double lo;
  double hi;

  bool Contains(double x) const { return lo <= x && x <= hi; }
};

// Percentile bootstrap interval for mean(a) - mean(b), resampling each group
// independently.
absl::StatusOr<Interval> BootstrapMeanDifference(std::span<const double> a,
                                                 std::span<const double> b,
                                                 size_t resamples,
                                                 double confidence,
                                                 uint64_t seed);

}  // namespace sensedp

#endif  // SENSEDP_EVALUATION_H_
