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

#ifndef SENSEDP_CALIBRATION_H_
#define SENSEDP_CALIBRATION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sensedp/embeddings.h"
#include "sensedp/mechanism.h"

namespace sensedp {

// Plausible-deniability proxies of one (word, epsilon) cell.
struct ProxyCell {
  // Fraction of runs returning the query word itself.
  double n_w = 0.0;
  // Distinct substitutes divided by the number of runs.
  double s_w = 0.0;
};

struct ProxyReport {
  Mode mode = Mode::kWord;
  std::vector<double> epsilon_grid;
  std::vector<std::string> query_words;
  size_t runs = 0;
  // cells[w][e] belongs to query_words[w] and epsilon_grid[e].
  std::vector<std::vector<ProxyCell>> cells;

  const ProxyCell& at(size_t word, size_t eps) const {
    return cells[word][eps];
  }
  double MeanNw(size_t eps) const;
  double MeanSw(size_t eps) const;
};

// Runs the mechanism `runs` times for every (word, epsilon) cell, each run on
// its own sub-stream (seed, word index, grid index, run). Query words are
// privatized without context.
absl::StatusOr<ProxyReport> EstimateProxies(
    const Mechanism& mechanism, Mode mode,
    std::span<const std::string> query_words, std::span<const double> grid,
    size_t runs, uint64_t seed, int threads = 1);

// Inclusive linear-interpolation quantile: position (n - 1) * q in the sorted
// sample.
absl::StatusOr<double> Quantile(std::span<const double> values, double q);

struct QuantileSummaryRow {
  double epsilon;
  // q-quantile of n_w over words.
  double quantile_n_w;
  // (1 - q)-quantile of s_w over words.
  double quantile_s_w;
  bool feasible;
};

std::vector<QuantileSummaryRow> SummarizeQuantiles(const ProxyReport& report,
                                                   double q, double threshold);

// Largest epsilon for which the q-quantile of n_w stays at or below
// `threshold` while the (1 - q)-quantile of s_w stays at or above it. Both
// curves are interpolated linearly in log(epsilon) between finite grid
// points; an infinite epsilon never qualifies.
absl::StatusOr<double> SelectEpsilon(const ProxyReport& report, double q,
                                     double threshold);

// Same selection over precomputed per-grid-point quantile curves.
absl::StatusOr<double> SelectEpsilon(std::span<const QuantileSummaryRow> rows,
                                     double threshold);

// Distinct vocabulary words sampled uniformly.
absl::StatusOr<std::vector<std::string>> SampleQueryWords(
    const EmbeddingStore& store, size_t count, uint64_t seed);

// Distinct words sampled with probability proportional to their frequency
// among the in-vocabulary corpus tokens, without replacement.
absl::StatusOr<std::vector<std::string>> SampleQueryWordsByFrequency(
    const EmbeddingStore& store, std::span<const std::string> corpus_tokens,
    size_t count, uint64_t seed);

std::string FormatEpsilon(double epsilon);
absl::StatusOr<double> ParseEpsilon(std::string_view text);

// CSV "word,epsilon,n_w,s_w".
void WriteProxyCsv(const ProxyReport& report, std::ostream& out);
// CSV "epsilon,quantile_n_w,quantile_s_w,feasible".
void WriteSummaryCsv(std::span<const QuantileSummaryRow> rows,
                     std::ostream& out);

}  // namespace sensedp

#endif  // SENSEDP_CALIBRATION_H_
