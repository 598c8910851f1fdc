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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the binary
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sensedp/calibration.h"
#include "sensedp/disambiguation.h"
#include "sensedp/embeddings.h"
#include "sensedp/evaluation.h"
#include "sensedp/mechanism.h"
#include "sensedp/random.h"
#include "sensedp/sense_induction.h"
#include "sensedp/strings.h"
#include "test_support.h"

namespace sensedp {
namespace {

namespace fs = std::filesystem;
using namespace ::sensedp::testing;  // NOLINT

constexpr uint64_t kSeed = 2026;

struct Outcome {
  bool pass;
  std::string detail;
};

// ---------------------------------------------------------------------------

Outcome PrivacyBound() {
  const EmbeddingStore store = StoreFromRows({{"a", {0, 0}},
                                              {"b", {1, 0}},
                                              {"c", {0, 1}},
                                              {"d", {1.5, 1.5}},
                                              {"e", {-1, 0.5}}});
  auto mechanism = *Mechanism::Create(&store);
  const size_t n = store.size();
  const int draws = 1000000;
  size_t checked = 0;
  double worst_margin = -1e300;
  std::string worst;
  bool pass = true;
  for (double eps : {0.5, 2.0}) {
    const NoiseSpec spec{eps, 2};
    std::vector<std::vector<double>> counts(n, std::vector<double>(n, 0.0));
    for (size_t w = 0; w < n; ++w) {
      Rng rng = SubstreamRng(kSeed, {1, static_cast<uint64_t>(eps * 10), w});
      for (int i = 0; i < draws; ++i) {
        auto r = mechanism.PrivatizeWord(store.token(w), std::nullopt,
                                         Mode::kWord, spec, rng);
        counts[w][*store.IndexOf(r->substitute)] += 1;
      }
    }
    for (size_t w = 0; w < n; ++w) {
      for (size_t v = 0; v < n; ++v) {
        if (v == w) continue;
        for (size_t out = 0; out < n; ++out) {
          const double hw = counts[w][out], hv = counts[v][out];
          if (hw < 1000 || hv < 1000) continue;
          const double pw = hw / draws, pv = hv / draws;
          const double se =
              std::sqrt((1 - pw) / (draws * pw) + (1 - pv) / (draws * pv));
          const double bound =
              eps * EuclideanDistance(store.Row(w), store.Row(v)) + 3 * se;
          const double ratio = std::log(pw / pv);
          ++checked;
          if (ratio - bound > worst_margin) {
            worst_margin = ratio - bound;
            worst = StrCat("eps=", eps, " ", store.token(w), "/",
                           store.token(v), "->", store.token(out));
          }
          if (ratio > bound) pass = false;
        }
      }
    }
  }
  return {pass && checked > 0,
          StrCat(checked, " (w, w', out) triples checked; max log-ratio minus "
                          "bound = ",
                 worst_margin, " at ", worst)};
}

// ---------------------------------------------------------------------------

Outcome NoiseMoments() {
  const int draws = 1000000;
  bool pass = true;
  std::ostringstream detail;
  for (size_t d : {2u, 300u}) {
    for (double eps : {1.0, 10.0}) {
      Rng rng = SubstreamRng(kSeed, {2, d, static_cast<uint64_t>(eps)});
      const NoiseSpec spec{eps, d};
      std::vector<double> sum(d, 0.0), sum2(d, 0.0);
      double norm_sum = 0.0;
      for (int i = 0; i < draws; ++i) {
        const auto z = SampleNoise(spec, rng);
        double n2 = 0.0;
        for (size_t j = 0; j < d; ++j) {
          sum[j] += z[j];
          sum2[j] += z[j] * z[j];
          n2 += z[j] * z[j];
        }
        norm_sum += std::sqrt(n2);
      }
      const double expected = static_cast<double>(d) / eps;
      const double rel = std::abs(norm_sum / draws - expected) / expected;
      size_t outside = 0;
      double worst_z = 0.0;
      double z2_sum = 0.0;
      for (size_t j = 0; j < d; ++j) {
        const double mean = sum[j] / draws;
        const double var = sum2[j] / draws - mean * mean;
        const double z = std::abs(mean) / std::sqrt(var / draws);
        worst_z = std::max(worst_z, z);
        z2_sum += z * z;
        outside += z > 3.0;
      }
      pass = pass && rel <= 0.01 && outside == 0;
      detail << "[d=" << d << " eps=" << eps << " norm rel.err=" << rel
             << " components beyond 3 SE=" << outside << "/" << d
             << " max |z|=" << worst_z << " sum z^2=" << z2_sum
             << " (chi-square, " << d << " dof)] ";
    }
  }
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------

Outcome ZeroNoiseFixedPoint() {
  const EmbeddingStore store = GaussianStore(50, 50, DeriveSeed(kSeed, {3}));
  const SenseInventory inventory =
      DensifiedInventory(store, 3, 0.5, DeriveSeed(kSeed, {3, 1}));
  auto mechanism = *Mechanism::Create(&store, &inventory);
  const std::vector<double> grid = {kNoiseless};
  const size_t runs = 100;
  size_t cells = 0, bad = 0;
  for (Mode mode : {Mode::kWord, Mode::kSense}) {
    auto report = *EstimateProxies(mechanism, mode, store.tokens(), grid, runs,
                                   kSeed, 1);
    for (const auto& row : report.cells) {
      ++cells;
      bad += !(row[0].n_w == 1.0 && row[0].s_w == 1.0 / runs);
    }
  }
  return {bad == 0,
          StrCat(cells - bad, "/", cells,
                 " (word, mode) cells have n_w=1 and s_w=1/runs")};
}

// ---------------------------------------------------------------------------

struct Violations {
  size_t count = 0;
  double largest = 0.0;
};

Violations CountViolations(const std::vector<double>& v, bool increasing) {
  Violations out;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double drop = increasing ? v[i] - v[i + 1] : v[i + 1] - v[i];
    if (drop > 0) {
      ++out.count;
      out.largest = std::max(out.largest, drop);
    }
  }
  return out;
}

bool Acceptable(const Violations& v) {
  return v.count == 0 || (v.count == 1 && v.largest <= 0.02);
}

Outcome ProxyMonotonicity() {
  const EmbeddingStore store = GaussianStore(50, 50, DeriveSeed(kSeed, {4}));
  auto mechanism = *Mechanism::Create(&store);
  const std::vector<double> grid = {1, 5, 10, 25, 50, kNoiseless};
  auto report = *EstimateProxies(mechanism, Mode::kWord, store.tokens(), grid,
                                 100, kSeed, 1);
  std::vector<double> n, s;
  std::ostringstream detail;
  for (size_t e = 0; e < grid.size(); ++e) {
    n.push_back(report.MeanNw(e));
    s.push_back(report.MeanSw(e));
    detail << "eps=" << FormatEpsilon(grid[e]) << ":(" << n.back() << ","
           << s.back() << ") ";
  }
  const Violations vn = CountViolations(n, true);
  const Violations vs = CountViolations(s, false);
  detail << "violations n_w=" << vn.count << " s_w=" << vs.count;
  return {Acceptable(vn) && Acceptable(vs), detail.str()};
}

// ---------------------------------------------------------------------------

Outcome BudgetStretch() {
  const EmbeddingStore store = UniformSquareStore(1000, DeriveSeed(kSeed, {5}));
  const SenseInventory inventory =
      DensifiedInventory(store, 3, 0.2, DeriveSeed(kSeed, {5, 1}));
  auto mechanism = *Mechanism::Create(&store, &inventory);
  const auto words = *SampleQueryWords(store, 100, DeriveSeed(kSeed, {5, 2}));
  const std::vector<double> grid = {1, 5, 10, 15, 25, 50, 100, 250, 500,
                                    kNoiseless};
  std::map<Mode, absl::StatusOr<double>> selected;
  for (Mode mode : {Mode::kWord, Mode::kSense}) {
    auto report =
        *EstimateProxies(mechanism, mode, words, grid, 100, kSeed, 1);
    selected.emplace(mode, SelectEpsilon(report, 0.9, 0.5));
  }
  auto show = [](const absl::StatusOr<double>& s) {
    return s.ok() ? FormatEpsilon(*s) : std::string(s.status().message());
  };
  const auto& word = selected.at(Mode::kWord);
  const auto& sense = selected.at(Mode::kSense);
  const bool pass = word.ok() && sense.ok() && *sense > *word;
  return {pass, StrCat("selected epsilon word=", show(word),
                       " sense=", show(sense))};
}

// ---------------------------------------------------------------------------

Outcome ContextSeparation() {
  const EmbeddingStore store = LoadToyBank();
  const SenseInventory inventory = *InduceInventory(store, ToyBankParams());
  auto mechanism = *Mechanism::Create(&store, &inventory);
  const auto dataset = *LoadContextPairs(DataPath("bank_context_pairs.tsv"));
  std::map<Mode, Interval> intervals;
  std::ostringstream detail;
  detail << "bank senses=" << inventory.SensesOf("bank").size() << "; ";
  for (Mode mode : {Mode::kWord, Mode::kSense}) {
    EvalOptions options;
    options.mode = mode;
    options.epsilon = 6.0;
    options.queries = 500;
    options.seed = DeriveSeed(kSeed, {6});
    auto result = EvalContextPairs(dataset, mechanism, options);
    if (!result.ok() || result->same_samples.empty() ||
        result->diff_samples.empty()) {
      return {false, "evaluation produced no samples"};
    }
    const Interval ci =
        *BootstrapMeanDifference(result->same_samples, result->diff_samples,
                                 10000, 0.95, DeriveSeed(kSeed, {6, 1}));
    intervals[mode] = ci;
    detail << ModeName(mode) << ": mean_same-mean_diff="
           << (*result->mean_same - *result->mean_diff) << " 95% CI=["
           << ci.lo << ", " << ci.hi << "] excluded=" << result->excluded
           << "; ";
  }
  const bool pass =
      intervals[Mode::kSense].lo > 0.0 && intervals[Mode::kWord].Contains(0.0);
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------

Outcome DisambiguationCorrectness() {
  std::mt19937_64 rng(DeriveSeed(kSeed, {7}));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  size_t cases = 0, correct = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t dim = 3 + rng() % 8;
    const size_t num_senses = 2 + rng() % 4;
    auto random_vec = [&] {
      std::vector<double> v(dim);
      for (double& x : v) x = normal(rng);
      return v;
    };
    std::vector<SenseEntry> entries;
    Rows rows = {{"target", random_vec()}};
    for (size_t k = 0; k < num_senses; ++k) {
      entries.push_back({"target", MakeSenseId("target", k), random_vec(), {}});
    }
    // Context tokens for sense k are positive multiples of its vector.
    for (size_t k = 0; k < num_senses; ++k) {
      for (size_t c = 0; c < 4; ++c) {
        std::vector<double> v = entries[k].vector;
        const double s = scale(rng);
        for (double& x : v) x *= s;
        rows.emplace_back(StrCat("ctx", k, "_", c), v);
      }
    }
    const EmbeddingStore store = StoreFromRows(rows);
    entries.push_back({"ctx0_0", "ctx0_0#0",
                       std::vector<double>(store.Row(1).begin(),
                                           store.Row(1).end()),
                       {}});
    const SenseInventory inventory = InventoryFromEntries(entries);
    auto mechanism = *Mechanism::Create(&store, &inventory);
    const size_t decoy = (rng() % (num_senses - 1)) + 1;
    for (size_t planted = 0; planted < num_senses; ++planted) {
      // Window: planted-sense context and unknown filler within 5 tokens,
      // a decoy sense's context beyond it.
      std::vector<std::string> tokens;
      const size_t other = (planted + decoy) % num_senses;
      for (size_t c = 0; c < 4; ++c) tokens.push_back(StrCat("ctx", other, "_", c));
      tokens.push_back("unknown_left");
      tokens.push_back("oov");
      for (size_t c = 0; c < 2; ++c) tokens.push_back(StrCat("ctx", planted, "_", c));
      tokens.push_back("oov");
      tokens.push_back("target");
      tokens.push_back(StrCat("ctx", planted, "_", 2));
      tokens.push_back("filler");
      tokens.push_back(StrCat("ctx", planted, "_", 3));
      const size_t at = 9;
      std::shuffle(tokens.begin() + 5, tokens.begin() + at, rng);
      const auto window = *ExtractWindow(tokens, at);
      const auto chosen =
          *Disambiguate(inventory, "target", ContextCentroid(store, window));
      auto records = *mechanism.PrivatizeText(tokens, Mode::kSense, kNoiseless,
                                              kDefaultWindow, kSeed);
      ++cases;
      correct += chosen->sense_id == MakeSenseId("target", planted) &&
                 records[at].sense_id == MakeSenseId("target", planted) &&
                 records[at].substitute == "target";
    }
  }
  return {correct == cases,
          StrCat(correct, "/", cases, " planted senses recovered over 100 "
                                      "random inventories")};
}

// ---------------------------------------------------------------------------

Outcome ClusteringOracle() {
  std::mt19937_64 rng(DeriveSeed(kSeed, {8}));
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  size_t exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t components = 2 + rng() % 6;
    std::vector<size_t> truth;
    std::vector<WeightedEdge> edges;
    for (size_t c = 0; c < components; ++c) {
      const size_t size = 1 + rng() % 12;
      const size_t base = truth.size();
      const double w = weight(rng);
      for (size_t i = 0; i < size; ++i) truth.push_back(c);
      for (size_t i = 0; i < size; ++i) {
        for (size_t j = i + 1; j < size; ++j) {
          edges.push_back({base + i, base + j, w});
        }
      }
    }
    // Hide the block structure from the node order.
    std::vector<size_t> perm(truth.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<size_t> shuffled_truth(truth.size());
    for (size_t i = 0; i < truth.size(); ++i) shuffled_truth[perm[i]] = truth[i];
    for (WeightedEdge& e : edges) {
      e.u = perm[e.u];
      e.v = perm[e.v];
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    const auto labels = ChineseWhispers(truth.size(), edges, 20, rng());
    std::map<size_t, size_t> label_to_comp, comp_to_label;
    bool ok = true;
    for (size_t i = 0; i < labels.size(); ++i) {
      auto [a, inserted_a] = label_to_comp.emplace(labels[i], shuffled_truth[i]);
      auto [b, inserted_b] = comp_to_label.emplace(shuffled_truth[i], labels[i]);
      ok = ok && a->second == shuffled_truth[i] && b->second == labels[i];
    }
    exact += ok;
  }

  std::vector<WeightedEdge> planted;
  std::vector<size_t> truth(20);
  for (size_t base : {0u, 10u}) {
    for (size_t i = 0; i < 10; ++i) {
      truth[base + i] = base / 10;
      for (size_t j = i + 1; j < 10; ++j) planted.push_back({base + i, base + j, 0.9});
    }
  }
  planted.push_back({9, 10, 0.1});
  double min_ari = 1.0, sum_ari = 0.0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const double ari =
        AdjustedRandIndex(ChineseWhispers(20, planted, 20, DeriveSeed(kSeed, {8, seed})),
                          truth);
    min_ari = std::min(min_ari, ari);
    sum_ari += ari;
  }
  return {exact == 100 && min_ari >= 0.9,
          StrCat(exact, "/100 disconnected graphs recovered exactly; planted "
                        "two-clique ARI min=",
                 min_ari, " mean=", sum_ari / 100)};
}

// ---------------------------------------------------------------------------

Outcome SpearmanOracle() {
  std::mt19937_64 rng(DeriveSeed(kSeed, {9}));
  double max_delta = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng() % 50;
    std::vector<double> x(n), y(n);
    std::iota(x.begin(), x.end(), -static_cast<double>(rng() % 100));
    std::iota(y.begin(), y.end(), static_cast<double>(rng() % 100));
    std::shuffle(x.begin(), x.end(), rng);
    std::shuffle(y.begin(), y.end(), rng);
    max_delta = std::max(max_delta,
                         std::abs(*Spearman(x, y) - RankDifferenceSpearman(x, y)));
  }
  double max_tie_delta = 0.0;
  size_t tie_cases = 0;
  for (size_t n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> x(n), y(n);
      for (double& v : x) v = static_cast<double>(rng() % 3);
      for (double& v : y) v = static_cast<double>(rng() % 3);
      const auto rx = ExhaustiveAverageRanks(x);
      const auto ry = ExhaustiveAverageRanks(y);
      const auto fx = FractionalRanks(x);
      for (size_t i = 0; i < n; ++i) {
        max_tie_delta = std::max(max_tie_delta, std::abs(fx[i] - rx[i]));
      }
      auto rho = Spearman(x, y);
      if (!rho.ok()) continue;
      ++tie_cases;
      max_tie_delta = std::max(max_tie_delta, std::abs(*rho - PearsonOracle(rx, ry)));
    }
  }
  return {max_delta < 1e-12 && max_tie_delta < 1e-12,
          StrCat("tie-free max |delta|=", max_delta, " over 200 lists; tied max "
                 "|delta|=", max_tie_delta, " over ", tie_cases,
                 " non-degenerate lists with n<=8")};
}

// ---------------------------------------------------------------------------

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int Shell(const std::string& command) {
  return std::system(command.c_str());
}

Outcome CliDeterminism() {
  const fs::path dir = fs::temp_directory_path() / "sensedp_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = SENSEDP_CLI_PATH;
  const std::string bank = DataPath("toy_bank.vec");
  const std::string sentences = DataPath("bank_sentences.txt");
  const std::string square = (dir / "square.vec").string();
  {
    std::ofstream out(square);
    WriteEmbedding(UniformSquareStore(1000, DeriveSeed(kSeed, {10})), out);
  }
  const std::string inventory = (dir / "bank.jsonl").string();
  if (Shell(cli + " induce --embedding " + bank + " --output " + inventory +
            " --seed 1 --neighbors 8 --edge-top-k 3 --min-cluster-size 4"
            " > /dev/null") != 0) {
    return {false, "induce failed"};
  }
  const std::string square_inventory = (dir / "square.jsonl").string();
  if (Shell(cli + " induce --embedding " + square + " --output " +
            square_inventory + " --seed 1 --neighbors 30 --edge-top-k 5" +
            " > /dev/null") != 0) {
    return {false, "induce failed"};
  }

  struct Job {
    std::string name;
    std::string args;
    std::vector<std::string> outputs;
  };
  std::vector<Job> jobs;
  for (const std::string mode : {"word", "sense"}) {
    jobs.push_back({"privatize-" + mode,
                    "privatize --embedding " + bank + " --inventory " + inventory +
                        " --mode " + mode + " --input " + sentences +
                        " --epsilon 3 --seed 77",
                    {"", ".txt"}});
    jobs.push_back({"calibrate-" + mode,
                    "calibrate --embedding " + square + " --inventory " +
                        square_inventory + " --mode " + mode +
                        " --grid 1,5,10,25,50,inf --runs 100 --num-queries 40"
                        " --seed 77",
                    {"", ".summary.csv"}});
  }
  size_t compared = 0;
  std::vector<std::string> differing;
  for (const Job& job : jobs) {
    std::map<int, std::vector<std::string>> artifacts;
    for (int threads : {1, 8}) {
      const fs::path out = dir / StrCat(job.name, "-t", threads);
      const fs::path stdout_path = dir / StrCat(job.name, "-t", threads, ".stdout");
      const int code = Shell(StrCat(cli, " ", job.args, " --threads ", threads,
                                    " --output ", out.string(), " > ",
                                    stdout_path.string()));
      if (code != 0) return {false, job.name + " exited non-zero"};
      for (const std::string& suffix : job.outputs) {
        artifacts[threads].push_back(Slurp(out.string() + suffix));
      }
      artifacts[threads].push_back(Slurp(stdout_path));
    }
    for (size_t i = 0; i < artifacts[1].size(); ++i) {
      ++compared;
      const bool is_file = i < job.outputs.size();
      if (artifacts[1][i] != artifacts[8][i] ||
          (is_file && artifacts[1][i].empty())) {
        differing.push_back(StrCat(job.name, "#", i));
      }
    }
  }
  fs::remove_all(dir);
  std::string list;
  for (const auto& d : differing) list += " " + d;
  return {differing.empty(),
          StrCat(compared - differing.size(), "/", compared,
                 " artifacts byte-identical between --threads 1 and 8",
                 differing.empty() ? "" : "; differing:" + list)};
}

}  // namespace
}  // namespace sensedp

int main() {
  using Criterion = std::pair<const char*, std::function<sensedp::Outcome()>>;
  const std::vector<Criterion> criteria = {
      {"privacy log-ratio bound", sensedp::PrivacyBound},
      {"noise sampler moments", sensedp::NoiseMoments},
      {"zero-noise fixed point", sensedp::ZeroNoiseFixedPoint},
      {"proxy monotonicity", sensedp::ProxyMonotonicity},
      {"budget stretch", sensedp::BudgetStretch},
      {"context separation", sensedp::ContextSeparation},
      {"disambiguation correctness", sensedp::DisambiguationCorrectness},
      {"clustering oracle", sensedp::ClusteringOracle},
      {"spearman oracle", sensedp::SpearmanOracle},
      {"cli determinism", sensedp::CliDeterminism},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const sensedp::Outcome outcome = criteria[i].second();
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << i + 1
              << " (" << criteria[i].first << ", " << seconds
              << "s): " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
