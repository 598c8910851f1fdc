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

#include "sensedp/embeddings.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <utility>

#include "sensedp/random.h"
#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    const size_t end = std::min(line.find(' ', pos), line.size());
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return fields;
}

bool ParseDouble(std::string_view field, double& value) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

bool ParseCount(std::string_view field, size_t& value) {
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

bool IsValidUtf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
    } else if ((c >> 4) == 0xe) {
      extra = 2;
    } else if ((c >> 3) == 0x1e) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (size_t j = 1; j <= extra; ++j) {
      if ((static_cast<unsigned char>(s[i + j]) >> 6) != 0x2) return false;
    }
    i += extra + 1;
  }
  return true;
}

bool NeighborLess(const EmbeddingStore& store, double da, size_t a, double db,
                  size_t b) {
  if (da != db) return da < db;
  return store.token(a) < store.token(b);
}

}  // namespace

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double Distance(std::span<const double> a, std::span<const double> b,
                DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::kEuclidean:
      return EuclideanDistance(a, b);
    case DistanceMetric::kCosine:
      return 1.0 - CosineSimilarity(a, b);
  }
  return 0.0;
}

EmbeddingStore::EmbeddingStore(std::vector<std::string> tokens,
                               std::vector<double> matrix, size_t dim)
    : tokens_(std::move(tokens)), matrix_(std::move(matrix)), dim_(dim) {
  index_.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::Create(
    std::vector<std::string> tokens, std::vector<double> matrix, size_t dim) {
  if (dim == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "dimension must be positive");
  }
  if (matrix.size() != tokens.size() * dim) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     StrCat("matrix has ", matrix.size(),
                                  " values, expected ", tokens.size() * dim));
  }
  std::unordered_map<std::string_view, size_t> seen;
  for (size_t row = 0; row < tokens.size(); ++row) {
    if (tokens[row].empty()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       StrCat("empty token at row ", row));
    }
    if (!seen.emplace(tokens[row], row).second) {
      return MakeError(ErrorKind::kDuplicateToken, tokens[row]);
    }
    for (size_t j = 0; j < dim; ++j) {
      const double v = matrix[row * dim + j];
      if (!std::isfinite(v)) {
        return MakeError(ErrorKind::kInvalidVector,
                         StrCat("non-finite component in ", tokens[row]));
      }
    }
  }
  return EmbeddingStore(std::move(tokens), std::move(matrix), dim);
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::FromRows(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  if (rows.empty()) return MakeError(ErrorKind::kEmptyStore, "no rows");
  const size_t dim = rows.front().second.size();
  std::vector<std::string> tokens;
  std::vector<double> matrix;
  tokens.reserve(rows.size());
  matrix.reserve(rows.size() * dim);
  for (const auto& [token, vec] : rows) {
    if (vec.size() != dim) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       StrCat("found ", vec.size(), ", expected ", dim,
                                    " (token ", token, ")"));
    }
    tokens.push_back(token);
    matrix.insert(matrix.end(), vec.begin(), vec.end());
  }
  return Create(std::move(tokens), std::move(matrix), dim);
}

std::optional<size_t> EmbeddingStore::IndexOf(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<std::span<const double>> EmbeddingStore::Lookup(
    std::string_view token) const {
  auto row = IndexOf(token);
  if (!row) return MakeError(ErrorKind::kUnknownToken, token);
  return Row(*row);
}

absl::StatusOr<EmbeddingStore> ParseEmbedding(
    std::istream& in, std::optional<size_t> expected_dim) {
  std::vector<std::string> tokens;
  std::vector<double> matrix;
  StringMap<size_t> seen;
  std::optional<size_t> dim = expected_dim;
  std::optional<size_t> declared_count;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' ||
                             line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = SplitFields(line);
    if (tokens.empty() && !declared_count && fields.size() == 2) {
      size_t count = 0, header_dim = 0;
      if (ParseCount(fields[0], count) && ParseCount(fields[1], header_dim)) {
        if (header_dim == 0) {
          return MakeError(ErrorKind::kMalformedLine,
                           StrCat("line ", line_no, ": zero dimension"));
        }
        if (dim && *dim != header_dim) {
          return MakeError(ErrorKind::kDimensionMismatch,
                           StrCat("found ", header_dim, ", expected ",
                                        *dim, " (line ", line_no, ")"));
        }
        declared_count = count;
        dim = header_dim;
        continue;
      }
    }
    if (fields.size() < 2) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": expected a token and "
                                    "at least one value"));
    }
    const std::string_view token = fields[0];
    if (!IsValidUtf8(token)) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": token is not UTF-8"));
    }
    const size_t found = fields.size() - 1;
    if (!dim) dim = found;
    if (found != *dim) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       StrCat("found ", found, ", expected ", *dim,
                                    " (line ", line_no, ")"));
    }
    if (!seen.emplace(std::string(token), line_no).second) {
      return MakeError(ErrorKind::kDuplicateToken,
                       StrCat(token, " (line ", line_no, ")"));
    }
    for (size_t j = 1; j < fields.size(); ++j) {
      double value = 0.0;
      if (!ParseDouble(fields[j], value)) {
        return MakeError(ErrorKind::kMalformedLine,
                         StrCat("line ", line_no, ": bad number '",
                                      fields[j], "'"));
      }
      if (!std::isfinite(value)) {
        return MakeError(ErrorKind::kInvalidVector,
                         StrCat("line ", line_no, ": non-finite value"));
      }
      matrix.push_back(value);
    }
    tokens.emplace_back(token);
  }
  if (tokens.empty()) return MakeError(ErrorKind::kEmptyFile, "no vectors");
  if (declared_count && *declared_count != tokens.size()) {
    return MakeError(ErrorKind::kMalformedLine,
                     StrCat("line 1: header declares ", *declared_count,
                                  " vectors but file has ", tokens.size()));
  }
  return EmbeddingStore::Create(std::move(tokens), std::move(matrix), *dim);
}

absl::StatusOr<EmbeddingStore> LoadEmbedding(const std::string& path,
                                             std::optional<size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIoError, "cannot open " + path);
  return ParseEmbedding(in, expected_dim);
}

void WriteEmbedding(const EmbeddingStore& store, std::ostream& out) {
  out << store.size() << ' ' << store.dim() << '\n';
  char buf[32];
  for (size_t row = 0; row < store.size(); ++row) {
    out << store.token(row);
    for (double v : store.Row(row)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, ptr - buf);
    }
    out << '\n';
  }
}

absl::StatusOr<double> Distance(const EmbeddingStore& store, std::string_view u,
                                std::string_view v, DistanceMetric metric) {
  SENSEDP_ASSIGN_OR_RETURN(auto a, store.Lookup(u));
  SENSEDP_ASSIGN_OR_RETURN(auto b, store.Lookup(v));
  return Distance(a, b, metric);
}

absl::StatusOr<std::vector<Neighbor>> Nearest(const EmbeddingStore& store,
                                              std::span<const double> query,
                                              size_t k, DistanceMetric metric) {
  if (store.empty()) return MakeError(ErrorKind::kEmptyStore, "no vectors");
  if (query.size() != store.dim()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     StrCat("found ", query.size(), ", expected ",
                                  store.dim()));
  }
  if (k == 0 || k > store.size()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     StrCat("k must be in [1, ", store.size(), "], got ",
                                  k));
  }
  std::vector<double> dist(store.size());
  for (size_t row = 0; row < store.size(); ++row) {
    dist[row] = Distance(query, store.Row(row), metric);
  }
  std::vector<size_t> order(store.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](size_t a, size_t b) {
                      return NeighborLess(store, dist[a], a, dist[b], b);
                    });
  std::vector<Neighbor> result;
  result.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    result.push_back({order[i], store.token(order[i]), dist[order[i]]});
  }
  return result;
}

size_t NearestRow(const EmbeddingStore& store, std::span<const double> query,
                  DistanceMetric metric) {
  size_t best = 0;
  double best_dist = Distance(query, store.Row(0), metric);
  for (size_t row = 1; row < store.size(); ++row) {
    const double d = Distance(query, store.Row(row), metric);
    if (NeighborLess(store, d, row, best_dist, best)) {
      best = row;
      best_dist = d;
    }
  }
  return best;
}

absl::StatusOr<double> MeanPairwiseDistance(const EmbeddingStore& store,
                                            size_t sample_size, uint64_t seed) {
  if (sample_size < 2) {
    return MakeError(ErrorKind::kInvalidArgument, "sample_size must be >= 2");
  }
  if (sample_size > store.size()) {
    return MakeError(ErrorKind::kSampleTooLarge,
                     StrCat(sample_size, " > ", store.size()));
  }
  std::vector<size_t> all(store.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<size_t> sample;
  sample.reserve(sample_size);
  Rng rng = SubstreamRng(seed, {});
  std::sample(all.begin(), all.end(), std::back_inserter(sample), sample_size,
              rng);
  double sum = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < sample.size(); ++i) {
    for (size_t j = i + 1; j < sample.size(); ++j) {
      sum += EuclideanDistance(store.Row(sample[i]), store.Row(sample[j]));
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

}  // namespace sensedp
