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

#ifndef SENSEDP_TOOLS_CLI_H_
#define SENSEDP_TOOLS_CLI_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "sensedp/mechanism.h"
#include "sensedp/sense_induction.h"

namespace sensedp::cli {

enum class Command { kInduce, kPrivatize, kCalibrate, kEvalPairs, kEvalContext, kStats };

struct RunConfig {
  Command command = Command::kPrivatize;
  std::string embedding_path;
  std::string inventory_path;
  Mode mode = Mode::kWord;
  double epsilon = 10.0;
  std::optional<uint64_t> seed;
  // Refuse to invent a seed when --seed is missing.
  bool test_mode = false;
  int threads = 1;
  size_t window = 5;
  std::string output_path;

  // induce
  InductionParams induction;

  // privatize: newline-delimited corpus; eval-*: dataset TSV.
  std::string input_path;
  std::string text_output_path;

  // calibrate
  std::vector<double> grid;
  size_t runs = 100;
  double quantile = 0.9;
  double threshold = 0.5;
  std::string summary_path;
  std::string query_words_path;
  std::string corpus_path;
  size_t num_query_words = 100;

  // eval-pairs / eval-context
  size_t queries = 25;
  std::string reference_path;
  bool verbose = false;

  // stats
  size_t sample_size = 1000;
};

// Checks flag combinations and value ranges; failures map to exit code 2.
absl::Status ValidateConfig(const RunConfig& config);

// Executes one command. Returns 0 on success, 1 on a library error (reported
// on `err` as "ERROR <Kind>: <detail>"), 2 on an invalid configuration.
int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and runs the selected command.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace sensedp::cli

#endif  // SENSEDP_TOOLS_CLI_H_
