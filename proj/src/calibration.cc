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

#include "sensedp/calibration.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include "sensedp/parallel.h"
#include "sensedp/random.h"
#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp {
namespace {

std::string FormatNumber(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// Largest t in [lo, hi] satisfying value0 + t * (value1 - value0) <= bound
// (or >= bound when `at_least`), narrowing [lo, hi] in place.
void Restrict(double value0, double value1, double bound, bool at_least,
              double& lo, double& hi) {
  double slope = value1 - value0;
  double offset = bound - value0;
  if (at_least) {
    slope = -slope;
    offset = -offset;
  }
  // Constraint: slope * t <= offset.
  if (slope == 0.0) {
    if (offset < 0.0) hi = -1.0;
    return;
  }
  const double t = offset / slope;
  if (slope > 0.0) {
    hi = std::min(hi, t);
  } else {
    lo = std::max(lo, t);
  }
}

}  // namespace

double ProxyReport::MeanNw(size_t eps) const {
  double sum = 0.0;
  for (const auto& row : cells) sum += row[eps].n_w;
  return cells.empty() ? 0.0 : sum / static_cast<double>(cells.size());
}

double ProxyReport::MeanSw(size_t eps) const {
  double sum = 0.0;
  for (const auto& row : cells) sum += row[eps].s_w;
  return cells.empty() ? 0.0 : sum / static_cast<double>(cells.size());
}

absl::StatusOr<ProxyReport> EstimateProxies(
    const Mechanism& mechanism, Mode mode,
    std::span<const std::string> query_words, std::span<const double> grid,
    size_t runs, uint64_t seed, int threads) {
  if (grid.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "epsilon grid is empty");
  }
  if (runs == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "runs must be >= 1");
  }
  if (query_words.empty()) {
    return MakeError(ErrorKind::kEmptyInput, "no query words");
  }
  if (mode == Mode::kSense && mechanism.inventory() == nullptr) {
    return MakeError(ErrorKind::kMissingInventory,
                     "sense mode requires a sense inventory");
  }
  for (double eps : grid) {
    SENSEDP_RETURN_IF_ERROR((NoiseSpec{eps, mechanism.dim()}.Validate()));
  }
  for (const std::string& word : query_words) {
    if (!mechanism.Knows(word, mode)) {
      return MakeError(ErrorKind::kUnknownToken, word);
    }
  }

  ProxyReport report;
  report.mode = mode;
  report.epsilon_grid.assign(grid.begin(), grid.end());
  report.query_words.assign(query_words.begin(), query_words.end());
  report.runs = runs;
  report.cells.assign(query_words.size(),
                      std::vector<ProxyCell>(grid.size()));

  const size_t num_cells = query_words.size() * grid.size();
  std::vector<absl::Status> errors(num_cells);
  ParallelFor(num_cells, threads, [&](size_t cell) {
    const size_t w = cell / grid.size();
    const size_t e = cell % grid.size();
    const NoiseSpec spec{grid[e], mechanism.dim()};
    StringSet distinct;
    size_t unchanged = 0;
    for (size_t run = 0; run < runs; ++run) {
      Rng rng = SubstreamRng(seed, {w, e, run});
      auto record = mechanism.PrivatizeWithCentroid(query_words[w],
                                                    std::nullopt, mode, spec,
                                                    rng);
      if (!record.ok()) {
        errors[cell] = record.status();
        return;
      }
      if (record->substitute == query_words[w]) ++unchanged;
      distinct.insert(std::move(record->substitute));
    }
    report.cells[w][e] = {
        static_cast<double>(unchanged) / static_cast<double>(runs),
        static_cast<double>(distinct.size()) / static_cast<double>(runs)};
  });
  for (const absl::Status& status : errors) {
    SENSEDP_RETURN_IF_ERROR(status);
  }
  return report;
}

absl::StatusOr<double> Quantile(std::span<const double> values, double q) {
  if (values.empty()) return MakeError(ErrorKind::kEmptyInput, "no values");
  if (!(q >= 0.0 && q <= 1.0)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     StrCat("quantile must be in [0, 1], got ", q));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const size_t lo = static_cast<size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<QuantileSummaryRow> SummarizeQuantiles(const ProxyReport& report,
                                                   double q, double threshold) {
  std::vector<QuantileSummaryRow> rows;
  std::vector<double> n_w(report.cells.size()), s_w(report.cells.size());
  for (size_t e = 0; e < report.epsilon_grid.size(); ++e) {
    for (size_t w = 0; w < report.cells.size(); ++w) {
      n_w[w] = report.cells[w][e].n_w;
      s_w[w] = report.cells[w][e].s_w;
    }
    QuantileSummaryRow row;
    row.epsilon = report.epsilon_grid[e];
    row.quantile_n_w = *Quantile(n_w, q);
    row.quantile_s_w = *Quantile(s_w, 1.0 - q);
    row.feasible = std::isfinite(row.epsilon) &&
                   row.quantile_n_w <= threshold &&
                   row.quantile_s_w >= threshold;
    rows.push_back(row);
  }
  return rows;
}

absl::StatusOr<double> SelectEpsilon(std::span<const QuantileSummaryRow> rows,
                                     double threshold) {
  std::vector<QuantileSummaryRow> finite;
  for (const QuantileSummaryRow& row : rows) {
    if (std::isfinite(row.epsilon)) finite.push_back(row);
  }
  std::sort(finite.begin(), finite.end(),
            [](const auto& a, const auto& b) { return a.epsilon < b.epsilon; });
  if (finite.size() < 2) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "selection needs at least two finite grid points");
  }
  for (size_t i = finite.size() - 1; i-- > 0;) {
    const QuantileSummaryRow& a = finite[i];
    const QuantileSummaryRow& b = finite[i + 1];
    double lo = 0.0, hi = 1.0;
    Restrict(a.quantile_n_w, b.quantile_n_w, threshold, false, lo, hi);
    Restrict(a.quantile_s_w, b.quantile_s_w, threshold, true, lo, hi);
    if (lo <= hi) {
      const double x0 = std::log(a.epsilon), x1 = std::log(b.epsilon);
      if (hi == 1.0) return b.epsilon;
      if (hi == 0.0) return a.epsilon;
      return std::exp(x0 + hi * (x1 - x0));
    }
  }
  return MakeError(ErrorKind::kNoFeasibleBudget,
                   "no epsilon on the grid keeps the quantiles deniable");
}

absl::StatusOr<double> SelectEpsilon(const ProxyReport& report, double q,
                                     double threshold) {
  if (report.cells.empty()) {
    return MakeError(ErrorKind::kEmptyInput, "report has no words");
  }
  const auto rows = SummarizeQuantiles(report, q, threshold);
  return SelectEpsilon(rows, threshold);
}

absl::StatusOr<std::vector<std::string>> SampleQueryWords(
    const EmbeddingStore& store, size_t count, uint64_t seed) {
  if (count > store.size()) {
    return MakeError(ErrorKind::kSampleTooLarge,
                     StrCat(count, " > ", store.size()));
  }
  std::vector<std::string> sample;
  sample.reserve(count);
  Rng rng = SubstreamRng(seed, {});
  std::sample(store.tokens().begin(), store.tokens().end(),
              std::back_inserter(sample), count, rng);
  return sample;
}

absl::StatusOr<std::vector<std::string>> SampleQueryWordsByFrequency(
    const EmbeddingStore& store, std::span<const std::string> corpus_tokens,
    size_t count, uint64_t seed) {
  std::vector<std::string> words;
  StringMap<size_t> freq;
  for (const std::string& token : corpus_tokens) {
    if (!store.Contains(token)) continue;
    if (freq[token]++ == 0) words.push_back(token);
  }
  if (count > words.size()) {
    return MakeError(ErrorKind::kSampleTooLarge,
                     StrCat(count, " > ", words.size(),
                                  " distinct in-vocabulary corpus words"));
  }
  // Weighted sampling without replacement via exponential keys u^(1/w).
  Rng rng = SubstreamRng(seed, {});
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<std::pair<double, size_t>> keys;
  keys.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    const double u = uniform(rng);
    keys.emplace_back(std::log(u) / static_cast<double>(freq[words[i]]), i);
  }
  std::partial_sort(keys.begin(), keys.begin() + count, keys.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::vector<std::string> sample;
  sample.reserve(count);
  for (size_t i = 0; i < count; ++i) sample.push_back(words[keys[i].second]);
  return sample;
}

std::string FormatEpsilon(double epsilon) {
  if (std::isinf(epsilon)) return "inf";
  return FormatNumber(epsilon);
}

absl::StatusOr<double> ParseEpsilon(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(c));
  if (lower == "inf" || lower == "infinity") return kNoiseless;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value) || value <= 0.0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     StrCat("epsilon must be a positive number or "
                                  "'inf', got '",
                                  text, "'"));
  }
  return value;
}

void WriteProxyCsv(const ProxyReport& report, std::ostream& out) {
  out << "word,epsilon,n_w,s_w\n";
  for (size_t w = 0; w < report.query_words.size(); ++w) {
    for (size_t e = 0; e < report.epsilon_grid.size(); ++e) {
      out << report.query_words[w] << ','
          << FormatEpsilon(report.epsilon_grid[e]) << ','
          << FormatNumber(report.cells[w][e].n_w) << ','
          << FormatNumber(report.cells[w][e].s_w) << '\n';
    }
  }
}

void WriteSummaryCsv(std::span<const QuantileSummaryRow> rows,
                     std::ostream& out) {
  out << "epsilon,quantile_n_w,quantile_s_w,feasible\n";
  for (const QuantileSummaryRow& row : rows) {
    out << FormatEpsilon(row.epsilon) << ',' << FormatNumber(row.quantile_n_w)
        << ',' << FormatNumber(row.quantile_s_w) << ','
        << (row.feasible ? "true" : "false") << '\n';
  }
}

}  // namespace sensedp
