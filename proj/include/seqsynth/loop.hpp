// Copyright 2026 The seqsynth Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// The search / check / learn cycle and its on-disk state.
//
// Every iteration writes one directory:
//   train.src, train.tgt   training pairs (learn phase)
//   model_<name>.txt       n-gram models of the portfolio
//   macros.txt             global macro table after mining
//   infer.src              "ANUM<TAB>SRC" lines handed to an external model
//   candidates.txt         deduplicated pool, "ANUM<TAB>TOKENS"
//   solutions.tsv          store snapshot after checking
//   journal.tsv            store changes made by this iteration
//   report.txt             "key: value" counters
//   state.txt              what is needed to run the next iteration

#ifndef SEQSYNTH_LOOP_HPP_
#define SEQSYNTH_LOOP_HPP_

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seqsynth/checker.hpp"
#include "seqsynth/oeis.hpp"
#include "seqsynth/store.hpp"
#include "seqsynth/synth.hpp"

namespace seqsynth::loop {

struct LoopConfig {
  std::string corpus;
  size_t max_terms = 0;
  std::string out_dir = "run";
  int iterations = 5;
  uint64_t seed = 1;
  int jobs = 0;  // 0: all cores

  std::string check_mode = "hybrid";
  int slow_from = -1;  // first iteration checked in slow mode; -1 never
  int64_t fast_t_call = 1000;
  int fast_n_compr = 20;
  int64_t slow_t_call = 100000;
  int slow_n_compr = 200;
  uint32_t hybrid_min_depth = 4;

  size_t random_count = 10000;
  int random_max_size = 20;
  size_t random_per_iteration = 0;

  std::string models = "full";       // comma list: full, half, quarter, continuous
  std::string target_form = "plain"; // plain, global, local
  size_t macro_budget = 10;
  size_t macro_min_length = 4;
  size_t macro_max_length = 20;
  size_t macro_min_count = 2;

  int ngram_order = 4;
  double smoothing = 1.0;
  int beam_width = 240;
  int max_length = 140;
  int per_sequence_cap = 240;
  size_t source_max_tokens = 80;

  // Shell command run each learning iteration; {dir} is replaced by the
  // iteration directory. It reads train.src / train.tgt / infer.src there
  // and writes external_candidates.txt.
  std::string external_command;

  checker::CheckConfig CheckFor(int iteration) const;
  synth::TargetForm form() const;
  std::vector<std::string> model_names() const;
  // Throws std::invalid_argument naming the first bad key.
  void Validate() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(LoopConfig&, const std::string&)> set;
  std::function<std::string(const LoopConfig&)> get;
};

const std::vector<ConfigKey>& ConfigKeys();

// Applies "key = value" lines ('#' starts a comment). Throws
// std::invalid_argument with the line number on unknown keys or bad values.
void ApplyConfig(LoopConfig& config, std::istream& in);
void ApplyConfigFile(LoopConfig& config, const std::string& path);
void SetConfigValue(LoopConfig& config, const std::string& key, const std::string& value);
// "key = value" for every key except out_dir and jobs, so that runs in
// different directories or with different thread counts write identical
// files.
void WriteConfig(std::ostream& out, const LoopConfig& config);
// Help text: every key with its default and description.
std::string ConfigHelp();

struct IterationReport {
  int iteration = 0;
  std::string mode;
  size_t training_pairs = 0;
  size_t macros = 0;
  size_t models_used = 0;
  size_t models_skipped = 0;
  size_t generated = 0;          // candidates before deduplication
  size_t invalid = 0;            // candidates that did not expand and decode
  size_t external_imported = 0;
  size_t unique = 0;             // UC
  size_t new_solutions = 0;      // NS
  size_t total_solutions = 0;    // TS
  size_t own_solutions = 0;      // OS: sequences solved by this iteration's pool
  checker::CheckReport check;

  void Write(std::ostream& out) const;
};

struct IterationState {
  int iteration = 0;  // index of the next iteration to run
  LoopConfig config;
  SolutionStore store;
  lang::GlobalMacroTable table;
  std::optional<synth::NGramModel> continuous;

  // Reads the state left in an iteration directory.
  static IterationState Load(const std::string& dir);
};

// Corpus-derived data shared by all iterations.
struct LoopContext {
  oeis::Corpus corpus;
  oeis::SequenceTrie trie;

  static LoopContext FromCorpus(oeis::Corpus corpus);
};

// Runs state.iteration into `dir` and advances the state.
IterationReport RunIteration(IterationState& state, const LoopContext& ctx, const std::string& dir);

std::string IterationDirName(int iteration);

// Runs config.iterations iterations under config.out_dir, starting fresh or
// from `resume` (an iteration directory). Appends to out_dir/journal.tsv.
std::vector<IterationReport> RunLoop(const LoopConfig& config,
                                     const std::optional<std::string>& resume = std::nullopt,
                                     std::ostream* log = nullptr);

}  // namespace seqsynth::loop

#endif  // SEQSYNTH_LOOP_HPP_
