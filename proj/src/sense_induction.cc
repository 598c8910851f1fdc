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

#include "sensedp/sense_induction.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <utility>

#include "json.hpp"
#include "sensedp/parallel.h"
#include "sensedp/random.h"
#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp {
namespace {

using ::nlohmann::json;
using ::nlohmann::ordered_json;

struct Cluster {
  std::vector<size_t> nodes;  // ascending node index
  std::string smallest_member;
};

}  // namespace

absl::Status InductionParams::Validate() const {
  if (neighborhood_size == 0 || edge_top_k == 0 || cw_iterations <= 0 ||
      min_cluster_size == 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "induction parameters must be positive");
  }
  if (edge_top_k > neighborhood_size) {
    return MakeError(ErrorKind::kInvalidArgument,
                     StrCat("edge_top_k (", edge_top_k,
                                  ") exceeds neighborhood_size (",
                                  neighborhood_size, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<EgoNetwork> BuildEgoNetwork(const EmbeddingStore& store,
                                           std::string_view word,
                                           const InductionParams& params) {
  SENSEDP_RETURN_IF_ERROR(params.Validate());
  SENSEDP_ASSIGN_OR_RETURN(auto ego_vec, store.Lookup(word));
  EgoNetwork graph;
  graph.ego = std::string(word);
  const size_t k = std::min(params.neighborhood_size + 1, store.size());
  SENSEDP_ASSIGN_OR_RETURN(auto neighbors,
                           Nearest(store, ego_vec, k, DistanceMetric::kCosine));
  std::vector<size_t> rows;
  for (const Neighbor& n : neighbors) {
    if (n.token == word) continue;
    if (rows.size() == params.neighborhood_size) break;
    rows.push_back(n.index);
    graph.nodes.push_back(n.token);
  }

  const size_t n = rows.size();
  const size_t top_k = std::min(params.edge_top_k, n == 0 ? 0 : n - 1);
  std::vector<double> sim(n * n, 0.0);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      const double s = CosineSimilarity(store.Row(rows[a]), store.Row(rows[b]));
      sim[a * n + b] = s;
      sim[b * n + a] = s;
    }
  }
  std::set<std::pair<size_t, size_t>> linked;
  std::vector<size_t> others;
  for (size_t a = 0; a < n; ++a) {
    others.clear();
    for (size_t b = 0; b < n; ++b) {
      if (b != a) others.push_back(b);
    }
    std::partial_sort(others.begin(), others.begin() + top_k, others.end(),
                      [&](size_t x, size_t y) {
                        const double sx = sim[a * n + x], sy = sim[a * n + y];
                        if (sx != sy) return sx > sy;
                        return graph.nodes[x] < graph.nodes[y];
                      });
    for (size_t i = 0; i < top_k; ++i) {
      linked.emplace(std::min(a, others[i]), std::max(a, others[i]));
    }
  }
  graph.edges.reserve(linked.size());
  for (const auto& [u, v] : linked) {
    graph.edges.push_back({u, v, sim[u * n + v]});
  }
  return graph;
}

std::vector<size_t> ChineseWhispers(size_t num_nodes,
                                    std::span<const WeightedEdge> edges,
                                    int iterations, uint64_t seed) {
  std::vector<std::vector<std::pair<size_t, double>>> adjacency(num_nodes);
  for (const WeightedEdge& e : edges) {
    if (e.u == e.v) continue;
    adjacency[e.u].emplace_back(e.v, e.weight);
    adjacency[e.v].emplace_back(e.u, e.weight);
  }
  std::vector<size_t> labels(num_nodes);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<size_t> order(labels);
  Rng rng = SubstreamRng(seed, {});
  std::map<size_t, double> mass;
  for (int round = 0; round < iterations; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (size_t node : order) {
      if (adjacency[node].empty()) continue;
      mass.clear();
      for (const auto& [other, weight] : adjacency[node]) {
        mass[labels[other]] += weight;
      }
      // std::map iterates labels in ascending order, so strict > keeps the
      // smallest label among equal masses.
      auto best = mass.begin();
      for (auto it = std::next(mass.begin()); it != mass.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      if (best->second <= 0.0) continue;
      if (best->first != labels[node]) {
        labels[node] = best->first;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

absl::StatusOr<PooledSense> PoolSenseVector(
    const EmbeddingStore& store, std::string_view ego,
    std::span<const std::string> members) {
  if (members.empty()) {
    return MakeError(ErrorKind::kEmptyInput, "sense has no members");
  }
  SENSEDP_ASSIGN_OR_RETURN(auto ego_vec, store.Lookup(ego));
  PooledSense pooled;
  pooled.vector.assign(store.dim(), 0.0);
  pooled.weights.reserve(members.size());
  std::vector<std::span<const double>> vecs;
  vecs.reserve(members.size());
  double total = 0.0;
  for (const std::string& m : members) {
    SENSEDP_ASSIGN_OR_RETURN(auto v, store.Lookup(m));
    vecs.push_back(v);
    const double w = std::max(0.0, CosineSimilarity(ego_vec, v));
    pooled.weights.push_back(w);
    total += w;
  }
  if (total == 0.0) {
    std::fill(pooled.weights.begin(), pooled.weights.end(), 1.0);
    total = static_cast<double>(members.size());
  }
  for (size_t i = 0; i < vecs.size(); ++i) {
    for (size_t j = 0; j < store.dim(); ++j) {
      pooled.vector[j] += pooled.weights[i] * vecs[i][j];
    }
  }
  for (double& x : pooled.vector) x /= total;
  return pooled;
}

std::string MakeSenseId(std::string_view word, size_t k) {
  return StrCat(word, "#", k);
}

absl::StatusOr<SenseInventory> SenseInventory::Create(
    std::vector<SenseEntry> senses) {
  if (senses.empty()) {
    return MakeError(ErrorKind::kMalformedInventory, "no senses");
  }
  SenseInventory inventory;
  inventory.dim_ = senses.front().vector.size();
  if (inventory.dim_ == 0) {
    return MakeError(ErrorKind::kMalformedInventory, "empty sense vector");
  }
  for (size_t i = 0; i < senses.size(); ++i) {
    const SenseEntry& s = senses[i];
    if (s.word.empty()) {
      return MakeError(ErrorKind::kMalformedInventory,
                       StrCat("empty word at sense ", i));
    }
    if (s.vector.size() != inventory.dim_) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       StrCat("found ", s.vector.size(), ", expected ",
                                    inventory.dim_, " (", s.sense_id, ")"));
    }
    for (double v : s.vector) {
      if (!std::isfinite(v)) {
        return MakeError(ErrorKind::kInvalidVector,
                         StrCat("non-finite component in ", s.sense_id));
      }
    }
    for (const SenseMember& m : s.members) {
      if (m.token.empty() || !std::isfinite(m.weight)) {
        return MakeError(ErrorKind::kMalformedInventory,
                         StrCat("bad member in ", s.sense_id));
      }
    }
    auto it = inventory.ranges_.find(s.word);
    if (it == inventory.ranges_.end()) {
      inventory.ranges_.emplace(s.word, Range{i, 1});
      inventory.words_.push_back(s.word);
      if (s.sense_id != MakeSenseId(s.word, 0)) {
        return MakeError(ErrorKind::kMalformedInventory,
                         StrCat("first sense of '", s.word,
                                      "' must be ", MakeSenseId(s.word, 0),
                                      ", got ", s.sense_id));
      }
      continue;
    }
    Range& range = it->second;
    if (range.begin + range.count != i) {
      return MakeError(ErrorKind::kMalformedInventory,
                       StrCat("senses of '", s.word,
                                    "' are not contiguous"));
    }
    if (s.sense_id != MakeSenseId(s.word, range.count)) {
      return MakeError(ErrorKind::kMalformedInventory,
                       StrCat("expected ",
                                    MakeSenseId(s.word, range.count), ", got ",
                                    s.sense_id));
    }
    ++range.count;
  }
  inventory.senses_ = std::move(senses);
  return inventory;
}

std::span<const SenseEntry> SenseInventory::SensesOf(
    std::string_view word) const {
  auto it = ranges_.find(word);
  if (it == ranges_.end()) return {};
  return std::span<const SenseEntry>(senses_).subspan(it->second.begin,
                                                      it->second.count);
}

std::optional<size_t> SenseInventory::FirstSenseIndex(
    std::string_view word) const {
  auto it = ranges_.find(word);
  if (it == ranges_.end()) return std::nullopt;
  return it->second.begin;
}

namespace {

absl::StatusOr<std::vector<SenseEntry>> InduceWord(
    const EmbeddingStore& store, size_t row, const InductionParams& params) {
  const std::string& word = store.token(row);
  SENSEDP_ASSIGN_OR_RETURN(EgoNetwork graph,
                           BuildEgoNetwork(store, word, params));
  std::vector<SenseEntry> senses;
  if (!graph.nodes.empty()) {
    const std::vector<size_t> labels = ChineseWhispers(
        graph, params.cw_iterations, DeriveSeed(params.seed, {row}));
    std::map<size_t, Cluster> by_label;
    for (size_t node = 0; node < labels.size(); ++node) {
      Cluster& c = by_label[labels[node]];
      c.nodes.push_back(node);
      if (c.smallest_member.empty() ||
          graph.nodes[node] < c.smallest_member) {
        c.smallest_member = graph.nodes[node];
      }
    }
    std::vector<Cluster> clusters;
    for (auto& [label, cluster] : by_label) {
      if (cluster.nodes.size() >= params.min_cluster_size) {
        clusters.push_back(std::move(cluster));
      }
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) {
                if (a.nodes.size() != b.nodes.size()) {
                  return a.nodes.size() > b.nodes.size();
                }
                return a.smallest_member < b.smallest_member;
              });
    const auto ego_vec = store.Row(row);
    for (const Cluster& cluster : clusters) {
      std::vector<std::string> members;
      members.reserve(cluster.nodes.size());
      for (size_t node : cluster.nodes) members.push_back(graph.nodes[node]);
      SENSEDP_ASSIGN_OR_RETURN(PooledSense pooled,
                               PoolSenseVector(store, word, members));
      SenseEntry entry;
      entry.word = word;
      entry.sense_id = MakeSenseId(word, senses.size());
      entry.vector = std::move(pooled.vector);
      for (const std::string& m : members) {
        entry.members.push_back(
            {m, CosineSimilarity(ego_vec, *store.Lookup(m))});
      }
      senses.push_back(std::move(entry));
    }
  }
  if (senses.empty()) {
    const auto own = store.Row(row);
    senses.push_back(
        {word, MakeSenseId(word, 0), std::vector<double>(own.begin(), own.end()),
         {}});
  }
  return senses;
}

}  // namespace

absl::StatusOr<SenseInventory> InduceInventory(const EmbeddingStore& store,
                                               const InductionParams& params,
                                               int threads) {
  SENSEDP_RETURN_IF_ERROR(params.Validate());
  if (store.empty()) return MakeError(ErrorKind::kEmptyStore, "no vectors");
  std::vector<absl::StatusOr<std::vector<SenseEntry>>> per_word(
      store.size(), std::vector<SenseEntry>{});
  ParallelFor(store.size(), threads, [&](size_t row) {
    per_word[row] = InduceWord(store, row, params);
  });
  std::vector<SenseEntry> all;
  for (auto& result : per_word) {
    if (!result.ok()) return result.status();
    for (SenseEntry& s : *result) all.push_back(std::move(s));
  }
  return SenseInventory::Create(std::move(all));
}

void WriteInventory(const SenseInventory& inventory, std::ostream& out) {
  for (const SenseEntry& s : inventory.senses()) {
    ordered_json line;
    line["word"] = s.word;
    line["sense_id"] = s.sense_id;
    line["vector"] = s.vector;
    ordered_json members = ordered_json::array();
    for (const SenseMember& m : s.members) {
      members.push_back(ordered_json::array({m.token, m.weight}));
    }
    line["members"] = std::move(members);
    out << line.dump() << '\n';
  }
}

absl::StatusOr<SenseInventory> ReadInventory(std::istream& in) {
  std::vector<SenseEntry> senses;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      const json obj = json::parse(line);
      SenseEntry entry;
      entry.word = obj.at("word").get<std::string>();
      entry.sense_id = obj.at("sense_id").get<std::string>();
      entry.vector = obj.at("vector").get<std::vector<double>>();
      for (const json& m : obj.at("members")) {
        if (!m.is_array() || m.size() != 2) {
          return MakeError(ErrorKind::kMalformedLine,
                           StrCat("line ", line_no,
                                        ": member must be [token, weight]"));
        }
        entry.members.push_back(
            {m[0].get<std::string>(), m[1].get<double>()});
      }
      senses.push_back(std::move(entry));
    } catch (const json::exception& e) {
      return MakeError(ErrorKind::kMalformedLine,
                       StrCat("line ", line_no, ": ", e.what()));
    }
  }
  if (senses.empty()) return MakeError(ErrorKind::kEmptyFile, "no senses");
  return SenseInventory::Create(std::move(senses));
}

absl::Status SaveInventory(const SenseInventory& inventory,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return MakeError(ErrorKind::kIoError, "cannot write " + path);
  WriteInventory(inventory, out);
  out.close();
  if (!out) return MakeError(ErrorKind::kIoError, "failed writing " + path);
  return absl::OkStatus();
}

absl::StatusOr<SenseInventory> LoadInventory(const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIoError, "cannot open " + path);
  return ReadInventory(in);
}

absl::StatusOr<SenseDistanceStats> WithinSenseDistanceStats(
    const SenseInventory& inventory, const EmbeddingStore& store,
    size_t baseline_sample, uint64_t seed) {
  if (inventory.num_senses() == 0) {
    return MakeError(ErrorKind::kEmptyInput, "inventory is empty");
  }
  std::map<size_t, std::pair<size_t, double>> groups;
  for (const std::string& word : inventory.words()) {
    const auto senses = inventory.SensesOf(word);
    if (senses.size() < 2) continue;
    double sum = 0.0;
    size_t pairs = 0;
    for (size_t i = 0; i < senses.size(); ++i) {
      for (size_t j = i + 1; j < senses.size(); ++j) {
        sum += EuclideanDistance(senses[i].vector, senses[j].vector);
        ++pairs;
      }
    }
    auto& [count, total] = groups[senses.size()];
    ++count;
    total += sum / static_cast<double>(pairs);
  }
  SenseDistanceStats stats;
  for (const auto& [num_senses, group] : groups) {
    stats.rows.push_back({num_senses, group.first,
                          group.second / static_cast<double>(group.first)});
  }
  SENSEDP_ASSIGN_OR_RETURN(
      stats.baseline,
      MeanPairwiseDistance(store, std::min(baseline_sample, store.size()),
                           seed));
  return stats;
}

}  // namespace sensedp
