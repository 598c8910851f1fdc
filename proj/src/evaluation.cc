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

#include "sensedp/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <utility>

#include "sensedp/calibration.h"
#include "sensedp/disambiguation.h"
#include "sensedp/parallel.h"
#include "sensedp/random.h"
#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp {
namespace {

constexpr double kIdenticalTolerance = 1e-9;

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (std::string_view piece : SplitNonEmpty(text, " \t")) {
    tokens.emplace_back(piece);
  }
  return tokens;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  return Split(line, '\t');
}

void StripLineEnd(std::string& line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.pop_back();
  }
}

std::optional<double> SubstituteSimilarity(const EmbeddingStore& reference,
                                           const std::string& a,
                                           const std::string& b) {
  auto ra = reference.IndexOf(a);
  auto rb = reference.IndexOf(b);
  if (!ra || !rb) return std::nullopt;
  return CosineSimilarity(reference.Row(*ra), reference.Row(*rb));
}

size_t FirstIndexOf(const std::vector<std::string>& tokens,
                    const std::string& word) {
  return static_cast<size_t>(
      std::find(tokens.begin(), tokens.end(), word) - tokens.begin());
}

absl::Status ValidateOptions(const Mechanism& mechanism,
                             const EvalOptions& options) {
  if (options.queries == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "queries must be >= 1");
  }
  if (options.mode == Mode::kSense && mechanism.inventory() == nullptr) {
    return MakeError(ErrorKind::kMissingInventory,
                     "sense mode requires a sense inventory");
  }
  return NoiseSpec{options.epsilon, mechanism.dim()}.Validate();
}

}  // namespace

std::vector<double> FractionalRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean(i+1 .. j+1).
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

absl::StatusOr<double> Spearman(std::span<const double> x,
                                std::span<const double> y) {
  if (x.size() != y.size()) {
    return MakeError(ErrorKind::kLengthMismatch,
                     StrCat(x.size(), " vs ", y.size()));
  }
  if (x.size() < 2) {
    return MakeError(ErrorKind::kDegenerateInput, "need at least two values");
  }
  const std::vector<double> rx = FractionalRanks(x);
  const std::vector<double> ry = FractionalRanks(y);
  auto constant = [](const std::vector<double>& r) {
    return std::all_of(r.begin(), r.end(),
                       [&](double v) { return v == r.front(); });
  };
  if (constant(rx) || constant(ry)) {
    return MakeError(ErrorKind::kDegenerateInput, "ranks have zero variance");
  }
  return std::clamp(PearsonCorrelation(rx, ry), -1.0, 1.0);
}

absl::StatusOr<std::vector<WordPair>> ReadWordPairs(std::istream& in) {
  std::vector<WordPair> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripLineEnd(line);
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    double score = 0.0;
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": expected 3 fields"));
    }
    auto [ptr, ec] = std::from_chars(
        fields[2].data(), fields[2].data() + fields[2].size(), score);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size() ||
        !std::isfinite(score)) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": bad score '",
                                    fields[2], "'"));
    }
    rows.push_back({std::string(fields[0]), std::string(fields[1]), score});
  }
  return rows;
}

absl::StatusOr<std::vector<WordPair>> LoadWordPairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIoError, "cannot open " + path);
  return ReadWordPairs(in);
}

absl::StatusOr<std::vector<ContextPair>> ReadContextPairs(std::istream& in) {
  std::vector<ContextPair> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripLineEnd(line);
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 5) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": expected 5 fields"));
    }
    ContextPair row;
    row.word1 = std::string(fields[0]);
    row.word2 = std::string(fields[1]);
    row.context1 = Tokenize(fields[2]);
    row.context2 = Tokenize(fields[3]);
    if (fields[4] == "T") {
      row.same_meaning = true;
    } else if (fields[4] == "F") {
      row.same_meaning = false;
    } else {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": label must be T or F"));
    }
    if (FirstIndexOf(row.context1, row.word1) == row.context1.size() ||
        FirstIndexOf(row.context2, row.word2) == row.context2.size()) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no,
                                    ": word does not occur in its context"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::StatusOr<std::vector<ContextPair>> LoadContextPairs(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIoError, "cannot open " + path);
  return ReadContextPairs(in);
}

absl::StatusOr<WordPairResult> EvalWordPairs(std::span<const WordPair> dataset,
                                             const Mechanism& mechanism,
                                             const EvalOptions& options) {
  SENSEDP_RETURN_IF_ERROR(ValidateOptions(mechanism, options));
  const EmbeddingStore& reference =
      options.reference ? *options.reference : mechanism.store();
  const NoiseSpec spec{options.epsilon, mechanism.dim()};

  std::vector<size_t> kept;
  for (size_t r = 0; r < dataset.size(); ++r) {
    if (mechanism.Knows(dataset[r].word1, options.mode) &&
        mechanism.Knows(dataset[r].word2, options.mode)) {
      kept.push_back(r);
    }
  }
  if (kept.empty()) {
    return MakeError(ErrorKind::kEmptyDatasetAfterFiltering,
                     "no word pair is in the vocabulary");
  }

  std::vector<std::vector<QuerySample>> per_row(kept.size());
  std::vector<absl::Status> errors(kept.size());
  ParallelFor(kept.size(), options.threads, [&](size_t i) {
    const size_t r = kept[i];
    const WordPair& pair = dataset[r];
    for (size_t q = 0; q < options.queries; ++q) {
      Rng rng1 = SubstreamRng(options.seed, {r, q, 0});
      Rng rng2 = SubstreamRng(options.seed, {r, q, 1});
      auto a = mechanism.PrivatizeWithCentroid(pair.word1, std::nullopt,
                                               options.mode, spec, rng1);
      auto b = mechanism.PrivatizeWithCentroid(pair.word2, std::nullopt,
                                               options.mode, spec, rng2);
      if (!a.ok() || !b.ok()) {
        errors[i] = a.ok() ? b.status() : a.status();
        return;
      }
      per_row[i].push_back(
          {r, q, a->substitute, b->substitute,
           SubstituteSimilarity(reference, a->substitute, b->substitute)});
    }
  });
  for (const absl::Status& status : errors) SENSEDP_RETURN_IF_ERROR(status);

  WordPairResult result;
  result.skipped_rows = dataset.size() - kept.size();
  std::vector<double> gold;
  for (size_t i = 0; i < kept.size(); ++i) {
    double sum = 0.0;
    size_t count = 0;
    for (const QuerySample& s : per_row[i]) {
      if (s.similarity) {
        sum += *s.similarity;
        ++count;
      }
    }
    result.samples.insert(result.samples.end(), per_row[i].begin(),
                          per_row[i].end());
    if (count == 0) {
      ++result.skipped_rows;
      continue;
    }
    result.rows.push_back(kept[i]);
    result.pair_scores.push_back(sum / static_cast<double>(count));
    gold.push_back(dataset[kept[i]].gold);
  }
  if (result.rows.empty()) {
    return MakeError(ErrorKind::kEmptyDatasetAfterFiltering,
                     "no substitute pair is in the reference embedding");
  }
  SENSEDP_ASSIGN_OR_RETURN(result.spearman,
                           Spearman(result.pair_scores, gold));
  return result;
}

absl::StatusOr<ContextPairResult> EvalContextPairs(
    std::span<const ContextPair> dataset, const Mechanism& mechanism,
    const EvalOptions& options) {
  SENSEDP_RETURN_IF_ERROR(ValidateOptions(mechanism, options));
  const EmbeddingStore& reference =
      options.reference ? *options.reference : mechanism.store();
  const NoiseSpec spec{options.epsilon, mechanism.dim()};

  std::vector<size_t> kept;
  for (size_t r = 0; r < dataset.size(); ++r) {
    if (mechanism.Knows(dataset[r].word1, options.mode) &&
        mechanism.Knows(dataset[r].word2, options.mode)) {
      kept.push_back(r);
    }
  }
  if (kept.empty()) {
    return MakeError(ErrorKind::kEmptyDatasetAfterFiltering,
                     "no context pair is in the vocabulary");
  }

  std::vector<std::vector<QuerySample>> per_row(kept.size());
  std::vector<absl::Status> errors(kept.size());
  ParallelFor(kept.size(), options.threads, [&](size_t i) {
    const size_t r = kept[i];
    const ContextPair& row = dataset[r];
    auto window = [&](const std::vector<std::string>& context,
                      const std::string& word)
        -> absl::StatusOr<std::optional<std::vector<double>>> {
      SENSEDP_ASSIGN_OR_RETURN(
          ContextWindow w,
          ExtractWindow(context, FirstIndexOf(context, word), options.window));
      return ContextCentroid(mechanism.store(), w);
    };
    auto centroid1 = window(row.context1, row.word1);
    auto centroid2 = window(row.context2, row.word2);
    if (!centroid1.ok() || !centroid2.ok()) {
      errors[i] = centroid1.ok() ? centroid2.status() : centroid1.status();
      return;
    }
    for (size_t q = 0; q < options.queries; ++q) {
      Rng rng1 = SubstreamRng(options.seed, {r, q, 0});
      Rng rng2 = SubstreamRng(options.seed, {r, q, 1});
      auto a = mechanism.PrivatizeWithCentroid(row.word1, *centroid1,
                                               options.mode, spec, rng1);
      auto b = mechanism.PrivatizeWithCentroid(row.word2, *centroid2,
                                               options.mode, spec, rng2);
      if (!a.ok() || !b.ok()) {
        errors[i] = a.ok() ? b.status() : a.status();
        return;
      }
      per_row[i].push_back(
          {r, q, a->substitute, b->substitute,
           SubstituteSimilarity(reference, a->substitute, b->substitute)});
    }
  });
  for (const absl::Status& status : errors) SENSEDP_RETURN_IF_ERROR(status);

  ContextPairResult result;
  result.skipped_rows = dataset.size() - kept.size();
  for (size_t i = 0; i < kept.size(); ++i) {
    const bool same = dataset[kept[i]].same_meaning;
    for (const QuerySample& s : per_row[i]) {
      result.samples.push_back(s);
      if (!s.similarity) continue;
      if (*s.similarity >= 1.0 - kIdenticalTolerance) {
        ++result.excluded;
        continue;
      }
      (same ? result.same_samples : result.diff_samples)
          .push_back(*s.similarity);
    }
  }
  auto mean = [](const std::vector<double>& v) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
  };
  result.mean_same = mean(result.same_samples);
  result.mean_diff = mean(result.diff_samples);
  return result;
}

absl::StatusOr<Interval> BootstrapMeanDifference(std::span<const double> a,
                                                 std::span<const double> b,
                                                 size_t resamples,
                                                 double confidence,
                                                 uint64_t seed) {
  if (a.empty() || b.empty()) {
    return MakeError(ErrorKind::kEmptyInput, "both groups need samples");
  }
  if (resamples == 0 || !(confidence > 0.0 && confidence < 1.0)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "need resamples >= 1 and confidence in (0, 1)");
  }
  Rng rng = SubstreamRng(seed, {});
  std::uniform_int_distribution<size_t> pick_a(0, a.size() - 1);
  std::uniform_int_distribution<size_t> pick_b(0, b.size() - 1);
  std::vector<double> diffs(resamples);
  for (double& d : diffs) {
    double sa = 0.0, sb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sa += a[pick_a(rng)];
    for (size_t i = 0; i < b.size(); ++i) sb += b[pick_b(rng)];
    d = sa / static_cast<double>(a.size()) - sb / static_cast<double>(b.size());
  }
  const double alpha = 1.0 - confidence;
  SENSEDP_ASSIGN_OR_RETURN(double lo, Quantile(diffs, alpha / 2.0));
  SENSEDP_ASSIGN_OR_RETURN(double hi, Quantile(diffs, 1.0 - alpha / 2.0));
  return Interval{lo, hi};
}

}  // namespace sensedp
