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


// Candidate generation: random programs, training-pair rendering, the n-gram
// guidance model with grammar-constrained beam search, and global macro
// mining.

#ifndef SEQSYNTH_SYNTH_HPP_
#define SEQSYNTH_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqsynth/integer.hpp"
#include "seqsynth/lang.hpp"
#include "seqsynth/oeis.hpp"
#include "seqsynth/store.hpp"

namespace seqsynth::synth {

// mt19937_64 with bounded draws that do not depend on the standard library's
// distribution implementations, so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t Next() { return engine_(); }
  // Uniform in [0, n); n > 0.
  uint64_t Below(uint64_t n);
  // Uniform in [0, 1).
  double Unit();

 private:
  std::mt19937_64 engine_;
};

// Mixes a seed with tags into an independent stream seed.
uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b = 0);

// ---- random programs ----

struct RandomConfig {
  int max_size = 20;
  // Relative operator weights indexed by Op; empty means uniform.
  std::vector<double> weights;
};

// Up to `count` distinct random programs (fewer when the space under
// max_size is smaller). Deterministic in `seed`.
std::vector<lang::TokenString> RandomPrograms(size_t count, const RandomConfig& config,
                                              uint64_t seed);

// ---- training pairs ----

inline constexpr char kSourceSeparator = '%';
inline constexpr char kSourceMinus = '-';

// Terms as source tokens: each integer's digits least significant first, a
// leading '-' token for negatives, '%' between integers. Whole terms are
// kept while the token count stays within max_tokens.
std::string RenderSource(const std::vector<Integer>& terms, size_t max_tokens = 80);
// Inverse of RenderSource. Throws std::invalid_argument on bad input.
std::vector<Integer> ParseSource(std::string_view source);

struct TrainingPair {
  oeis::ANum anum = 0;
  std::string source;
  lang::TokenString target;
};

// Target forms of the stored programs.
enum class TargetForm { kPlain, kGlobalMacros, kLocalMacros };

// Rewrites a plain program with local macros "def | ... | body" where that
// shortens it; returns it unchanged otherwise. Expansion gives back `plain`.
lang::TokenString LocalAbstract(const lang::TokenString& plain, int max_macros = 10);

// One pair per distinct stored program (smallest, then fastest), in A-number
// order.
std::vector<TrainingPair> MakeTrainingPairs(const SolutionStore& store,
                                            const oeis::Corpus& corpus, TargetForm form,
                                            const lang::GlobalMacroTable* table,
                                            size_t max_source_tokens = 80);
void WriteTrainingPairs(const std::vector<TrainingPair>& pairs, const std::string& src_path,
                        const std::string& tgt_path);

// ---- candidate exchange ----

struct Candidate {
  oeis::ANum anum = 0;
  lang::TokenString tokens;
};

struct ImportTally {
  size_t lines = 0;
  size_t accepted = 0;
  size_t malformed = 0;  // bad line shape, bad A-number or unknown token
  size_t invalid = 0;    // well-formed tokens that do not expand and decode
};

// Reads "ANUM<TAB>TOKENS" lines. Lines whose tokens do not expand (with
// `table`) and decode are dropped and tallied. Throws std::runtime_error if
// the file cannot be opened.
std::vector<Candidate> ImportCandidates(const std::string& path,
                                        const lang::GlobalMacroTable* table, ImportTally* tally);
std::vector<Candidate> ReadCandidates(std::istream& in, const lang::GlobalMacroTable* table,
                                      ImportTally* tally);
void WriteCandidates(std::ostream& out, const std::vector<Candidate>& candidates);

// ---- n-gram guidance ----

// Coarse features of the first eight terms: sign pattern, monotonicity,
// first two values and magnitude.
uint16_t SourceBucket(const std::vector<Integer>& terms);

class NGramModel {
 public:
  struct Options {
    int order = 4;           // target units per n-gram (context = order - 1)
    double smoothing = 1.0;  // back-off mass at every level
  };

  NGramModel() : NGramModel(Options{}) {}
  explicit NGramModel(Options options);

  // Vocabulary: every unit the decoder may emit. Units seen in training are
  // added automatically.
  void AddToVocab(lang::UnitCode u);
  const std::vector<lang::UnitCode>& vocab() const { return vocab_; }
  const Options& options() const { return options_; }

  // Counts one target (already split into units) under `bucket`.
  void Add(uint16_t bucket, const std::vector<lang::UnitCode>& target);
  // Adds another model's counts (continuous training).
  void Merge(const NGramModel& other);

  // log P(u | bucket, context) for every vocabulary unit, in vocab() order.
  // `context` holds the units emitted so far.
  void LogProbs(uint16_t bucket, const std::vector<lang::UnitCode>& context,
                std::vector<double>& out) const;

  size_t trained_targets() const { return targets_; }

  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;
  static NGramModel Read(std::istream& in);
  static NGramModel Load(const std::string& path);

  friend bool operator==(const NGramModel& a, const NGramModel& b);

 private:
  struct Row {
    uint64_t total = 0;
    std::map<lang::UnitCode, uint64_t> next;
    friend bool operator==(const Row&, const Row&) = default;
  };
  static uint64_t Key(uint16_t bucket, const std::vector<lang::UnitCode>& context, size_t len);
  void Count(uint64_t key, lang::UnitCode u, uint64_t n = 1);

  Options options_;
  std::vector<lang::UnitCode> vocab_;
  std::unordered_map<uint64_t, Row> rows_;
  size_t targets_ = 0;
};

// Trains a model on `pairs`. Grammar units (all operator letters, plus
// references to every table entry, or local macro glyphs in local mode) are
// always in the vocabulary.
NGramModel TrainGuidance(const std::vector<TrainingPair>& pairs, const NGramModel::Options& options,
                         const lang::GlobalMacroTable* table, TargetForm form);

struct BeamConfig {
  int width = 240;
  int max_length = 140;            // in decoding units
  int per_sequence_cap = 240;
};

struct BeamCandidate {
  lang::TokenString tokens;  // in the model's form (may carry macros)
  double logprob = 0;
};

// Beam search. In plain and global modes decoding is constrained to emit
// exactly one program (global references count by their expansion); in local
// mode output is free and ends with the end token, which is not included.
// Returns at most `width` complete candidates ranked by log-probability, ties
// broken by token string.
std::vector<BeamCandidate> BeamGenerate(const NGramModel& model, uint16_t bucket,
                                        const BeamConfig& config,
                                        const lang::GlobalMacroTable* table, TargetForm form);

// ---- global macro mining ----

struct MiningConfig {
  size_t budget = 10;
  size_t min_length = 4;
  size_t max_length = 20;
  size_t min_count = 2;
};

struct MinedMacro {
  lang::TokenString tokens;  // plain
  size_t count = 0;
};

// Ranks contiguous plain token substrings of `programs` by their number of
// non-overlapping occurrences (count desc, longer first, then token order),
// and returns the best `budget` ones not already in `table`.
std::vector<MinedMacro> MineGlobalMacros(const std::vector<lang::TokenString>& programs,
                                         const lang::GlobalMacroTable& table,
                                         const MiningConfig& config);
// Appends mined macros in abstracted form. Returns the number added.
size_t AppendMacros(lang::GlobalMacroTable& table, const std::vector<MinedMacro>& mined);

// Distinct plain programs of a store (smallest and fastest).
std::vector<lang::TokenString> StoredPrograms(const SolutionStore& store);

}  // namespace seqsynth::synth

#endif  // SEQSYNTH_SYNTH_HPP_
