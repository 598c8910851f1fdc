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
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "sensedp/status.h"
#include "test_support.h"

namespace sensedp {
namespace {

using ::sensedp::testing::DataPath;
using ::sensedp::testing::ExhaustiveAverageRanks;
using ::sensedp::testing::LoadToyBank;
using ::sensedp::testing::PearsonOracle;
using ::sensedp::testing::RankDifferenceSpearman;
using ::sensedp::testing::StoreFromRows;
using ::sensedp::testing::ToyBankParams;

TEST(SpearmanTest, Examples) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {2, 1, 4, 3, 5};
  const std::vector<double> rev = {5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(*Spearman(x, x), 1.0);
  EXPECT_DOUBLE_EQ(*Spearman(x, rev), -1.0);
  EXPECT_NEAR(*Spearman(x, y), 0.8, 1e-12);
  EXPECT_NEAR(RankDifferenceSpearman(x, y), 0.8, 1e-12);
}

TEST(SpearmanTest, Errors) {
  const std::vector<double> three = {1, 2, 3}, two = {1, 2}, one = {1};
  const std::vector<double> flat = {4, 4, 4};
  EXPECT_EQ(ErrorKindOf(Spearman(three, two).status()), "LengthMismatch");
  EXPECT_EQ(ErrorKindOf(Spearman(one, one).status()), "DegenerateInput");
  EXPECT_EQ(ErrorKindOf(Spearman(three, flat).status()), "DegenerateInput");
}

TEST(SpearmanTest, MatchesRankDifferenceOracle) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng() % 30;
    std::vector<double> x(n), y(n);
    std::iota(x.begin(), x.end(), -static_cast<double>(n));
    std::iota(y.begin(), y.end(), 100.0);
    std::shuffle(x.begin(), x.end(), rng);
    std::shuffle(y.begin(), y.end(), rng);
    EXPECT_NEAR(*Spearman(x, y), RankDifferenceSpearman(x, y), 1e-12);
  }
}

TEST(SpearmanTest, TiesMatchExhaustiveRanks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng() % 7;
    std::vector<double> x(n), y(n);
    for (double& v : x) v = static_cast<double>(rng() % 3);
    for (double& v : y) v = static_cast<double>(rng() % 4);
    const auto rx = ExhaustiveAverageRanks(x);
    const auto ry = ExhaustiveAverageRanks(y);
    EXPECT_THAT(FractionalRanks(x), ::testing::Pointwise(::testing::DoubleNear(1e-12), rx));
    auto rho = Spearman(x, y);
    const bool flat_x = std::all_of(rx.begin(), rx.end(), [&](double r) { return r == rx[0]; });
    const bool flat_y = std::all_of(ry.begin(), ry.end(), [&](double r) { return r == ry[0]; });
    if (flat_x || flat_y) {
      EXPECT_EQ(ErrorKindOf(rho.status()), "DegenerateInput");
      continue;
    }
    ASSERT_TRUE(rho.ok());
    EXPECT_NEAR(*rho, PearsonOracle(rx, ry), 1e-12);
  }
}

TEST(SpearmanTest, MonotoneTransformInvariant) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(20), y(20);
    for (double& v : x) v = normal(rng);
    for (double& v : y) v = normal(rng);
    std::vector<double> tx(x), ty(y);
    for (double& v : tx) v = std::exp(3 * v) + 2;
    for (double& v : ty) v = -1.0 / (1.0 + std::exp(-v));
    EXPECT_NEAR(*Spearman(tx, y), *Spearman(x, y), 1e-12);
    EXPECT_NEAR(*Spearman(x, ty), -*Spearman(x, y), 1e-12);
  }
}

TEST(DatasetReaderTest, WordPairs) {
  std::istringstream in("a\tb\t1.5\n\nc\td\t-2e0\r\n");
  auto rows = ReadWordPairs(in);
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), 2u);
  EXPECT_EQ((*rows)[1].word2, "d");
  EXPECT_DOUBLE_EQ((*rows)[1].gold, -2.0);
  std::istringstream bad("a\tb\n");
  EXPECT_EQ(ErrorKindOf(ReadWordPairs(bad).status()), "MalformedLine");
  std::istringstream bad_score("a\tb\tx\n");
  EXPECT_EQ(ErrorKindOf(ReadWordPairs(bad_score).status()), "MalformedLine");
  auto bundled = LoadWordPairs(DataPath("toy_word_pairs.tsv"));
  ASSERT_TRUE(bundled.ok());
  EXPECT_EQ(bundled->size(), 11u);
}

TEST(DatasetReaderTest, ContextPairs) {
  std::istringstream in("x\ty\tthe x here\ty there\tT\n");
  auto rows = ReadContextPairs(in);
  ASSERT_TRUE(rows.ok()) << rows.status();
  EXPECT_THAT((*rows)[0].context1, ::testing::ElementsAre("the", "x", "here"));
  EXPECT_TRUE((*rows)[0].same_meaning);
  std::istringstream bad_label("x\ty\tx\ty\tyes\n");
  EXPECT_EQ(ErrorKindOf(ReadContextPairs(bad_label).status()), "MalformedLine");
  std::istringstream missing("x\ty\tno\ty\tF\n");
  EXPECT_EQ(ErrorKindOf(ReadContextPairs(missing).status()), "MalformedLine");
  auto bundled = LoadContextPairs(DataPath("bank_context_pairs.tsv"));
  ASSERT_TRUE(bundled.ok());
  EXPECT_EQ(bundled->size(), 3u);
}

TEST(EvalWordPairsTest, NoiselessMatchesEmbeddingSpearman) {
  const EmbeddingStore store = LoadToyBank();
  auto mechanism = Mechanism::Create(&store);
  const auto dataset = *LoadWordPairs(DataPath("toy_word_pairs.tsv"));
  EvalOptions options;
  options.epsilon = kNoiseless;
  options.queries = 3;
  auto result = EvalWordPairs(dataset, *mechanism, options);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->skipped_rows, 1u);
  std::vector<double> cos, gold;
  for (const auto& row : dataset) {
    if (!store.Contains(row.word1) || !store.Contains(row.word2)) continue;
    cos.push_back(CosineSimilarity(*store.Lookup(row.word1), *store.Lookup(row.word2)));
    gold.push_back(row.gold);
  }
  EXPECT_NEAR(result->spearman, *Spearman(cos, gold), 1e-12);
  EXPECT_EQ(result->samples.size(), 10u * 3);
}

TEST(EvalWordPairsTest, IdenticalBeatsAntipodal) {
  const EmbeddingStore store = StoreFromRows(
      {{"a", {1, 0}}, {"b", {-1, 0}}, {"c", {0, 1}}, {"d", {0.7, 0.7}}});
  auto mechanism = Mechanism::Create(&store);
  const std::vector<WordPair> dataset = {{"a", "a", 1.0}, {"a", "b", 0.0}};
  for (double eps : {0.5, 2.0, 8.0}) {
    EvalOptions options;
    options.epsilon = eps;
    options.queries = 400;
    options.seed = 3;
    auto result = EvalWordPairs(dataset, *mechanism, options);
    ASSERT_TRUE(result.ok());
    EXPECT_GE(result->pair_scores[0], result->pair_scores[1]) << eps;
  }
}

TEST(EvalWordPairsTest, SeedsAgreeWithinMonteCarloBand) {
  const EmbeddingStore store = LoadToyBank();
  auto mechanism = Mechanism::Create(&store);
  const auto dataset = *LoadWordPairs(DataPath("toy_word_pairs.tsv"));
  EvalOptions options;
  options.epsilon = 3.0;
  auto first = *EvalWordPairs(dataset, *mechanism, options);
  options.seed = 1;
  auto second = *EvalWordPairs(dataset, *mechanism, options);
  ASSERT_EQ(first.rows, second.rows);
  for (size_t i = 0; i < first.rows.size(); ++i) {
    std::vector<double> sims;
    for (const auto& s : first.samples) {
      if (s.row == first.rows[i] && s.similarity) sims.push_back(*s.similarity);
    }
    double mean = 0, var = 0;
    for (double v : sims) mean += v;
    mean /= sims.size();
    for (double v : sims) var += (v - mean) * (v - mean);
    var /= sims.size() - 1;
    const double band = 4.0 * std::sqrt(2.0 * var / sims.size()) + 1e-12;
    EXPECT_LE(std::abs(first.pair_scores[i] - second.pair_scores[i]), band);
  }
}

TEST(EvalWordPairsTest, ThreadIndependentAndFiltered) {
  const EmbeddingStore store = LoadToyBank();
  auto mechanism = Mechanism::Create(&store);
  const auto dataset = *LoadWordPairs(DataPath("toy_word_pairs.tsv"));
  EvalOptions options;
  options.epsilon = 2.0;
  options.seed = 5;
  auto one = *EvalWordPairs(dataset, *mechanism, options);
  options.threads = 8;
  auto many = *EvalWordPairs(dataset, *mechanism, options);
  EXPECT_EQ(one.pair_scores, many.pair_scores);
  EXPECT_EQ(one.spearman, many.spearman);

  const std::vector<WordPair> all_oov = {{"toaster", "kettle", 1.0}};
  EXPECT_EQ(ErrorKindOf(EvalWordPairs(all_oov, *mechanism, options).status()),
            "EmptyDatasetAfterFiltering");
}

TEST(EvalWordPairsTest, ReferenceEmbedding) {
  const EmbeddingStore store = StoreFromRows({{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}});
  const EmbeddingStore reference =
      StoreFromRows({{"a", {1, 0}}, {"b", {1, 0.01}}, {"c", {-1, 0}}});
  auto mechanism = Mechanism::Create(&store);
  const std::vector<WordPair> dataset = {{"a", "b", 1}, {"a", "c", 0}};
  EvalOptions options;
  options.epsilon = kNoiseless;
  options.queries = 1;
  options.reference = &reference;
  auto result = EvalWordPairs(dataset, *mechanism, options);
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->pair_scores[0], CosineSimilarity(*reference.Lookup("a"), *reference.Lookup("b")), 1e-12);
  EXPECT_NEAR(result->pair_scores[1], -1.0, 1e-12);
}

class ToyBankEvalTest : public ::testing::Test {
 protected:
  void SetUp() override {
    inventory_ = *InduceInventory(store_, ToyBankParams());
    dataset_ = *LoadContextPairs(DataPath("bank_context_pairs.tsv"));
  }
  const EmbeddingStore store_ = LoadToyBank();
  std::optional<SenseInventory> inventory_;
  std::vector<ContextPair> dataset_;
};

TEST_F(ToyBankEvalTest, NoiselessExcludesEverything) {
  auto mechanism = Mechanism::Create(&store_, &*inventory_);
  for (Mode mode : {Mode::kWord, Mode::kSense}) {
    EvalOptions options;
    options.mode = mode;
    options.epsilon = kNoiseless;
    options.queries = 25;
    auto result = EvalContextPairs(dataset_, *mechanism, options);
    ASSERT_TRUE(result.ok()) << result.status();
    EXPECT_EQ(result->excluded, dataset_.size() * 25);
    EXPECT_FALSE(result->mean_same.has_value());
    EXPECT_FALSE(result->mean_diff.has_value());
  }
}

TEST_F(ToyBankEvalTest, SingleRowBookkeeping) {
  auto mechanism = Mechanism::Create(&store_, &*inventory_);
  const std::vector<ContextPair> one = {dataset_[0]};
  EvalOptions options;
  options.mode = Mode::kSense;
  options.epsilon = 3.0;
  options.queries = 25;
  auto result = EvalContextPairs(one, *mechanism, options);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->samples.size(), 25u);
  EXPECT_LE(result->diff_samples.size(), 25u);
  EXPECT_EQ(result->diff_samples.size() + result->excluded, 25u);
  EXPECT_TRUE(result->same_samples.empty());
}

TEST_F(ToyBankEvalTest, SenseModeSeparatesContexts) {
  auto mechanism = Mechanism::Create(&store_, &*inventory_);
  std::map<Mode, double> gap;
  for (Mode mode : {Mode::kWord, Mode::kSense}) {
    EvalOptions options;
    options.mode = mode;
    options.epsilon = 6.0;
    options.queries = 500;
    options.seed = 21;
    auto result = EvalContextPairs(dataset_, *mechanism, options);
    ASSERT_TRUE(result.ok());
    ASSERT_TRUE(result->mean_same && result->mean_diff);
    gap[mode] = *result->mean_same - *result->mean_diff;
  }
  EXPECT_GT(gap[Mode::kSense], 0.0);
  EXPECT_LT(std::abs(gap[Mode::kWord]), gap[Mode::kSense] / 2);
}

TEST(BootstrapTest, Intervals) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<double> a(400), b(400), c(400);
  for (double& v : a) v = normal(rng);
  for (double& v : b) v = normal(rng);
  for (double& v : c) v = normal(rng) + 1.0;
  auto same = BootstrapMeanDifference(a, b, 2000, 0.95, 1);
  ASSERT_TRUE(same.ok());
  EXPECT_LT(same->lo, same->hi);
  auto shifted = BootstrapMeanDifference(c, a, 2000, 0.95, 1);
  EXPECT_GT(shifted->lo, 0.5);
  EXPECT_TRUE(shifted->Contains(1.0));
  EXPECT_EQ(ErrorKindOf(BootstrapMeanDifference({}, a, 10, 0.95, 1).status()),
            "EmptyInput");
  EXPECT_EQ(ErrorKindOf(BootstrapMeanDifference(a, b, 10, 1.0, 1).status()),
            "InvalidArgument");
}

TEST(BootstrapTest, CoverageOfEqualMeans) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  int covered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(100), b(100);
    for (double& v : a) v = normal(rng);
    for (double& v : b) v = normal(rng);
    covered += BootstrapMeanDifference(a, b, 500, 0.95, trial)->Contains(0.0);
  }
  EXPECT_GE(covered, 175);
}

}  // namespace
}  // namespace sensedp
