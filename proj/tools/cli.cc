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

#include "cli.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "sensedp/calibration.h"
#include "sensedp/embeddings.h"
#include "sensedp/evaluation.h"
#include "sensedp/status.h"
#include "sensedp/strings.h"

namespace sensedp::cli {
namespace {

using ::nlohmann::ordered_json;

constexpr int kExitModuleError = 1;
constexpr int kExitConfigError = 2;

const std::vector<double>& DefaultGrid() {
  static const std::vector<double> grid = {1,  5,   10,  15,  25,
                                           50, 100, 250, 500, kNoiseless};
  return grid;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "NA";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatOptional(const std::optional<double>& value) {
  return value ? FormatNumber(*value) : "NA";
}

absl::StatusOr<std::vector<std::string>> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kIoError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

absl::StatusOr<std::ofstream> OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return MakeError(ErrorKind::kIoError, "cannot write " + path);
  return out;
}

std::vector<std::string> Tokens(std::string_view line) {
  std::vector<std::string> tokens;
  for (std::string_view t : SplitNonEmpty(line, " \t")) tokens.emplace_back(t);
  return tokens;
}

struct Resources {
  std::optional<EmbeddingStore> store;
  std::optional<SenseInventory> inventory;
};

absl::Status LoadResources(const RunConfig& config, bool want_inventory,
                           Resources& res) {
  SENSEDP_ASSIGN_OR_RETURN(res.store, LoadEmbedding(config.embedding_path));
  if (want_inventory && !config.inventory_path.empty()) {
    SENSEDP_ASSIGN_OR_RETURN(res.inventory,
                             LoadInventory(config.inventory_path));
  }
  return absl::OkStatus();
}

absl::StatusOr<Mechanism> MakeMechanism(const RunConfig& config,
                                        const Resources& res) {
  return Mechanism::Create(
      &*res.store,
      config.mode == Mode::kSense && res.inventory ? &*res.inventory : nullptr);
}

absl::Status RunInduce(const RunConfig& config, uint64_t seed,
                       std::ostream& out) {
  Resources res;
  SENSEDP_RETURN_IF_ERROR(LoadResources(config, false, res));
  InductionParams params = config.induction;
  params.seed = seed;
  SENSEDP_ASSIGN_OR_RETURN(SenseInventory inventory,
                           InduceInventory(*res.store, params, config.threads));
  SENSEDP_RETURN_IF_ERROR(SaveInventory(inventory, config.output_path));
  out << "senses=" << inventory.num_senses()
      << " words=" << inventory.num_words() << '\n';
  return absl::OkStatus();
}

absl::Status RunPrivatize(const RunConfig& config, uint64_t seed) {
  Resources res;
  SENSEDP_RETURN_IF_ERROR(LoadResources(config, true, res));
  SENSEDP_ASSIGN_OR_RETURN(Mechanism mechanism, MakeMechanism(config, res));
  SENSEDP_ASSIGN_OR_RETURN(std::vector<std::string> docs,
                           ReadLines(config.input_path));
  SENSEDP_ASSIGN_OR_RETURN(std::ofstream records,
                           OpenOutput(config.output_path));
  const std::string text_path = config.text_output_path.empty()
                                    ? config.output_path + ".txt"
                                    : config.text_output_path;
  SENSEDP_ASSIGN_OR_RETURN(std::ofstream text, OpenOutput(text_path));
  for (size_t d = 0; d < docs.size(); ++d) {
    const std::vector<std::string> tokens = Tokens(docs[d]);
    if (tokens.empty()) {
      text << '\n';
      continue;
    }
    SENSEDP_ASSIGN_OR_RETURN(
        auto privatized,
        mechanism.PrivatizeText(tokens, config.mode, config.epsilon,
                                config.window, seed, d, config.threads));
    for (size_t i = 0; i < privatized.size(); ++i) {
      const PrivatizationRecord& r = privatized[i];
      ordered_json line;
      line["input"] = r.input;
      line["sense_id"] = r.sense_id ? ordered_json(*r.sense_id) : nullptr;
      line["substitute"] = r.substitute;
      line["oov"] = r.oov;
      records << line.dump() << '\n';
      text << (i ? " " : "") << r.substitute;
    }
    text << '\n';
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::string>> QueryWords(const RunConfig& config,
                                                    const EmbeddingStore& store,
                                                    uint64_t seed) {
  if (!config.query_words_path.empty()) {
    SENSEDP_ASSIGN_OR_RETURN(auto lines, ReadLines(config.query_words_path));
    std::vector<std::string> words;
    StringSet seen;
    for (const std::string& line : lines) {
      for (std::string& t : Tokens(line)) {
        if (seen.insert(t).second) words.push_back(std::move(t));
      }
    }
    return words;
  }
  const uint64_t query_seed = DeriveSeed(seed, {0x71});
  if (!config.corpus_path.empty()) {
    SENSEDP_ASSIGN_OR_RETURN(auto lines, ReadLines(config.corpus_path));
    std::vector<std::string> tokens;
    for (const std::string& line : lines) {
      for (std::string& t : Tokens(line)) tokens.push_back(std::move(t));
    }
    return SampleQueryWordsByFrequency(store, tokens, config.num_query_words,
                                       query_seed);
  }
  return SampleQueryWords(store, std::min(config.num_query_words, store.size()),
                          query_seed);
}

absl::Status RunCalibrate(const RunConfig& config, uint64_t seed,
                          std::ostream& out) {
  Resources res;
  SENSEDP_RETURN_IF_ERROR(LoadResources(config, true, res));
  SENSEDP_ASSIGN_OR_RETURN(Mechanism mechanism, MakeMechanism(config, res));
  SENSEDP_ASSIGN_OR_RETURN(auto words, QueryWords(config, *res.store, seed));
  const std::vector<double>& grid =
      config.grid.empty() ? DefaultGrid() : config.grid;
  SENSEDP_ASSIGN_OR_RETURN(
      ProxyReport report,
      EstimateProxies(mechanism, config.mode, words, grid, config.runs, seed,
                      config.threads));
  const auto summary =
      SummarizeQuantiles(report, config.quantile, config.threshold);
  {
    SENSEDP_ASSIGN_OR_RETURN(std::ofstream csv, OpenOutput(config.output_path));
    WriteProxyCsv(report, csv);
  }
  const std::string summary_path = config.summary_path.empty()
                                       ? config.output_path + ".summary.csv"
                                       : config.summary_path;
  {
    SENSEDP_ASSIGN_OR_RETURN(std::ofstream csv, OpenOutput(summary_path));
    WriteSummaryCsv(summary, csv);
  }
  SENSEDP_ASSIGN_OR_RETURN(double selected,
                           SelectEpsilon(summary, config.threshold));
  out << "selected_epsilon=" << FormatEpsilon(selected) << '\n';
  return absl::OkStatus();
}

void WriteSampleRecords(const std::vector<QuerySample>& samples,
                        std::ostream& out) {
  for (const QuerySample& s : samples) {
    ordered_json line;
    line["row"] = s.row;
    line["query"] = s.query;
    line["substitute1"] = s.substitute1;
    line["substitute2"] = s.substitute2;
    line["similarity"] =
        s.similarity ? ordered_json(*s.similarity) : ordered_json(nullptr);
    out << line.dump() << '\n';
  }
}

absl::StatusOr<EvalOptions> MakeEvalOptions(const RunConfig& config,
                                            uint64_t seed,
                                            std::optional<EmbeddingStore>& ref) {
  EvalOptions options;
  options.mode = config.mode;
  options.epsilon = config.epsilon;
  options.queries = config.queries;
  options.seed = seed;
  options.window = config.window;
  options.threads = config.threads;
  if (!config.reference_path.empty()) {
    SENSEDP_ASSIGN_OR_RETURN(ref, LoadEmbedding(config.reference_path));
    options.reference = &*ref;
  }
  return options;
}

absl::Status RunEvalPairs(const RunConfig& config, uint64_t seed,
                          std::ostream& out) {
  Resources res;
  SENSEDP_RETURN_IF_ERROR(LoadResources(config, true, res));
  SENSEDP_ASSIGN_OR_RETURN(Mechanism mechanism, MakeMechanism(config, res));
  SENSEDP_ASSIGN_OR_RETURN(auto dataset, LoadWordPairs(config.input_path));
  std::optional<EmbeddingStore> reference;
  SENSEDP_ASSIGN_OR_RETURN(EvalOptions options,
                           MakeEvalOptions(config, seed, reference));
  SENSEDP_ASSIGN_OR_RETURN(WordPairResult result,
                           EvalWordPairs(dataset, mechanism, options));
  SENSEDP_ASSIGN_OR_RETURN(std::ofstream csv, OpenOutput(config.output_path));
  csv << "mode,epsilon,queries,pairs,skipped,spearman\n"
      << ModeName(config.mode) << ',' << FormatEpsilon(config.epsilon) << ','
      << config.queries << ',' << result.rows.size() << ','
      << result.skipped_rows << ',' << FormatNumber(result.spearman) << '\n';
  if (config.verbose) {
    SENSEDP_ASSIGN_OR_RETURN(std::ofstream jsonl,
                             OpenOutput(config.output_path + ".records.jsonl"));
    WriteSampleRecords(result.samples, jsonl);
  }
  out << "spearman=" << FormatNumber(result.spearman) << '\n';
  return absl::OkStatus();
}

absl::Status RunEvalContext(const RunConfig& config, uint64_t seed,
                            std::ostream& out) {
  Resources res;
  SENSEDP_RETURN_IF_ERROR(LoadResources(config, true, res));
  SENSEDP_ASSIGN_OR_RETURN(Mechanism mechanism, MakeMechanism(config, res));
  SENSEDP_ASSIGN_OR_RETURN(auto dataset, LoadContextPairs(config.input_path));
  std::optional<EmbeddingStore> reference;
  SENSEDP_ASSIGN_OR_RETURN(EvalOptions options,
                           MakeEvalOptions(config, seed, reference));
  SENSEDP_ASSIGN_OR_RETURN(ContextPairResult result,
                           EvalContextPairs(dataset, mechanism, options));
  SENSEDP_ASSIGN_OR_RETURN(std::ofstream csv, OpenOutput(config.output_path));
  csv << "mode,epsilon,queries,rows,skipped,excluded,mean_same,mean_diff,"
         "same_samples,diff_samples\n"
      << ModeName(config.mode) << ',' << FormatEpsilon(config.epsilon) << ','
      << config.queries << ',' << dataset.size() - result.skipped_rows << ','
      << result.skipped_rows << ',' << result.excluded << ','
      << FormatOptional(result.mean_same) << ','
      << FormatOptional(result.mean_diff) << ',' << result.same_samples.size()
      << ',' << result.diff_samples.size() << '\n';
  if (config.verbose) {
    SENSEDP_ASSIGN_OR_RETURN(std::ofstream jsonl,
                             OpenOutput(config.output_path + ".records.jsonl"));
    WriteSampleRecords(result.samples, jsonl);
  }
  out << "mean_same=" << FormatOptional(result.mean_same)
      << " mean_diff=" << FormatOptional(result.mean_diff)
      << " excluded=" << result.excluded << '\n';
  return absl::OkStatus();
}

absl::Status RunStats(const RunConfig& config, uint64_t seed,
                      std::ostream& out) {
  Resources res;
  SENSEDP_RETURN_IF_ERROR(LoadResources(config, true, res));
  SENSEDP_ASSIGN_OR_RETURN(
      SenseDistanceStats stats,
      WithinSenseDistanceStats(*res.inventory, *res.store, config.sample_size,
                               seed));
  SENSEDP_ASSIGN_OR_RETURN(std::ofstream csv, OpenOutput(config.output_path));
  csv << "num_senses,num_words,mean_within_sense_distance,"
         "baseline_mean_pairwise_distance\n";
  for (const SenseDistanceRow& row : stats.rows) {
    csv << row.num_senses << ',' << row.num_words << ','
        << FormatNumber(row.mean_distance) << ','
        << FormatNumber(stats.baseline) << '\n';
  }
  out << "baseline=" << FormatNumber(stats.baseline) << '\n';
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateConfig(const RunConfig& config) {
  auto fail = [](const std::string& detail) {
    return MakeError(ErrorKind::kInvalidArgument, detail);
  };
  if (config.embedding_path.empty()) return fail("--embedding is required");
  if (config.output_path.empty()) return fail("--output is required");
  if (config.test_mode && !config.seed) {
    return fail("--seed is required in test mode");
  }
  if (config.threads < 1) return fail("--threads must be >= 1");
  if (!(config.epsilon > 0.0)) return fail("--epsilon must be > 0 or 'inf'");
  const bool uses_mode = config.command == Command::kPrivatize ||
                         config.command == Command::kCalibrate ||
                         config.command == Command::kEvalPairs ||
                         config.command == Command::kEvalContext;
  if (uses_mode && config.mode == Mode::kSense &&
      config.inventory_path.empty()) {
    return fail("sense mode requires --inventory");
  }
  switch (config.command) {
    case Command::kInduce:
      if (absl::Status s = config.induction.Validate(); !s.ok()) {
        return fail(ErrorDetailOf(s));
      }
      break;
    case Command::kPrivatize:
      if (config.input_path.empty()) return fail("--input is required");
      break;
    case Command::kCalibrate:
      if (config.runs == 0) return fail("--runs must be >= 1");
      if (!(config.quantile >= 0.0 && config.quantile <= 1.0)) {
        return fail("--quantile must be in [0, 1]");
      }
      for (double eps : config.grid) {
        if (!(eps > 0.0)) return fail("--grid values must be > 0 or 'inf'");
      }
      break;
    case Command::kEvalPairs:
    case Command::kEvalContext:
      if (config.input_path.empty()) return fail("--dataset is required");
      if (config.queries == 0) return fail("--queries must be >= 1");
      break;
    case Command::kStats:
      if (config.inventory_path.empty()) return fail("--inventory is required");
      if (config.sample_size < 2) return fail("--sample-size must be >= 2");
      break;
  }
  return absl::OkStatus();
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) {
    err << "ERROR " << ErrorKindOf(s) << ": " << ErrorDetailOf(s) << '\n';
    return kExitConfigError;
  }
  uint64_t seed = 0;
  if (config.seed) {
    seed = *config.seed;
  } else {
    seed = static_cast<uint64_t>(
        std::chrono::system_clock::now().time_since_epoch().count());
    err << "note: no --seed given, using " << seed << '\n';
  }
  absl::Status status;
  switch (config.command) {
    case Command::kInduce:
      status = RunInduce(config, seed, out);
      break;
    case Command::kPrivatize:
      status = RunPrivatize(config, seed);
      break;
    case Command::kCalibrate:
      status = RunCalibrate(config, seed, out);
      break;
    case Command::kEvalPairs:
      status = RunEvalPairs(config, seed, out);
      break;
    case Command::kEvalContext:
      status = RunEvalContext(config, seed, out);
      break;
    case Command::kStats:
      status = RunStats(config, seed, out);
      break;
  }
  if (!status.ok()) {
    err << "ERROR " << ErrorKindOf(status) << ": " << ErrorDetailOf(status)
        << '\n';
    return kExitModuleError;
  }
  return 0;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Context-aware text privatization with metric differential "
               "privacy"};
  app.require_subcommand(1);

  RunConfig config;
  std::string mode = "word";
  std::string epsilon = "10";
  std::string grid;
  uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--embedding", config.embedding_path,
                    "word2vec text embedding")
        ->required();
    cmd->add_option("--output", config.output_path, "primary output file")
        ->required();
    cmd->add_option("--seed", seed, "master random seed");
    cmd->add_flag("--test-mode", config.test_mode,
                  "fail instead of deriving a seed from the clock");
    cmd->add_option("--threads", config.threads, "worker threads");
  };
  auto add_mechanism = [&](CLI::App* cmd, bool with_epsilon) {
    cmd->add_option("--mode", mode, "word or sense")
        ->check(CLI::IsMember({"word", "sense"}));
    cmd->add_option("--inventory", config.inventory_path,
                    "sense inventory (JSONL)");
    if (with_epsilon) {
      cmd->add_option("--epsilon", epsilon, "privacy budget or 'inf'");
    }
    cmd->add_option("--window", config.window, "context words per side");
  };

  CLI::App* induce = app.add_subcommand("induce", "induce a sense inventory");
  add_common(induce);
  induce->add_option("--neighbors", config.induction.neighborhood_size,
                     "ego network size");
  induce->add_option("--edge-top-k", config.induction.edge_top_k,
                     "edges kept per neighbor");
  induce->add_option("--iterations", config.induction.cw_iterations,
                     "clustering iterations");
  induce->add_option("--min-cluster-size", config.induction.min_cluster_size,
                     "smallest cluster kept as a sense");

  CLI::App* privatize = app.add_subcommand("privatize", "privatize a corpus");
  add_common(privatize);
  add_mechanism(privatize, true);
  privatize->add_option("--input", config.input_path,
                        "one document per line")
      ->required();
  privatize->add_option("--text-output", config.text_output_path,
                        "privatized corpus (default: <output>.txt)");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "estimate N_w/S_w and select epsilon");
  add_common(calibrate);
  add_mechanism(calibrate, false);
  calibrate->add_option("--grid", grid, "comma-separated epsilons");
  calibrate->add_option("--runs", config.runs, "mechanism runs per word");
  calibrate->add_option("--quantile", config.quantile, "selection quantile");
  calibrate->add_option("--threshold", config.threshold,
                        "bound on both proxy quantiles");
  calibrate->add_option("--summary", config.summary_path,
                        "quantile summary (default: <output>.summary.csv)");
  calibrate->add_option("--query-words", config.query_words_path,
                        "file of query words");
  calibrate->add_option("--corpus", config.corpus_path,
                        "sample query words by corpus frequency");
  calibrate->add_option("--num-queries", config.num_query_words,
                        "query words sampled");

  CLI::App* eval_pairs =
      app.add_subcommand("eval-pairs", "word-pair similarity correlation");
  CLI::App* eval_context =
      app.add_subcommand("eval-context", "same vs different context similarity");
  for (CLI::App* cmd : {eval_pairs, eval_context}) {
    add_common(cmd);
    add_mechanism(cmd, true);
    cmd->add_option("--dataset", config.input_path, "dataset TSV")->required();
    cmd->add_option("--queries", config.queries, "mechanism runs per item");
    cmd->add_option("--reference", config.reference_path,
                    "embedding used to measure similarity");
    cmd->add_flag("--verbose", config.verbose,
                  "write per-query records to <output>.records.jsonl");
  }

  CLI::App* stats = app.add_subcommand("stats", "within-sense distance table");
  add_common(stats);
  stats->add_option("--inventory", config.inventory_path,
                    "sense inventory (JSONL)")
      ->required();
  stats->add_option("--sample-size", config.sample_size,
                    "tokens sampled for the baseline distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == induce) config.command = Command::kInduce;
  if (chosen == privatize) config.command = Command::kPrivatize;
  if (chosen == calibrate) config.command = Command::kCalibrate;
  if (chosen == eval_pairs) config.command = Command::kEvalPairs;
  if (chosen == eval_context) config.command = Command::kEvalContext;
  if (chosen == stats) config.command = Command::kStats;
  if (chosen->count("--seed") > 0) config.seed = seed;

  auto config_error = [&](const absl::Status& s) {
    err << "ERROR " << ErrorKindOf(s) << ": " << ErrorDetailOf(s) << '\n';
    return kExitConfigError;
  };
  auto parsed_mode = ParseMode(mode);
  if (!parsed_mode.ok()) return config_error(parsed_mode.status());
  config.mode = *parsed_mode;
  auto parsed_epsilon = ParseEpsilon(epsilon);
  if (!parsed_epsilon.ok()) return config_error(parsed_epsilon.status());
  config.epsilon = *parsed_epsilon;
  if (!grid.empty()) {
    for (std::string_view item : SplitNonEmpty(grid, ",")) {
      auto value = ParseEpsilon(item);
      if (!value.ok()) return config_error(value.status());
      config.grid.push_back(*value);
    }
  }
  return Run(config, out, err);
}

}  // namespace sensedp::cli
