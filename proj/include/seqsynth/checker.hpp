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

// Checking candidate programs against the sequence trie.
//
// Each candidate is run as a sequence program and its terms are walked down
// the trie; every mark passed is a sequence the candidate solves, with the
// cumulative cost at that point as its speed. Hybrid mode runs everything
// under fast limits first, then re-runs under slow limits the smallest
// candidate of each trie node that was reached (at depth >= min_depth) by a
// candidate aborted on time or on the compr limit.

#ifndef SEQSYNTH_CHECKER_HPP_
#define SEQSYNTH_CHECKER_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqsynth/eval.hpp"
#include "seqsynth/lang.hpp"
#include "seqsynth/oeis.hpp"
#include "seqsynth/store.hpp"

namespace seqsynth::checker {

enum class CheckMode { kFast, kSlow, kHybrid };
std::string_view ModeName(CheckMode m);
std::optional<CheckMode> ParseMode(std::string_view s);

struct CheckConfig {
  CheckMode mode = CheckMode::kHybrid;
  eval::EvalLimits fast = eval::EvalLimits::Fast();
  eval::EvalLimits slow = eval::EvalLimits::Slow();
  uint32_t hybrid_min_depth = 4;
  int jobs = 1;
};

// Why a candidate's run ended.
enum class RunEnd : uint8_t {
  kTrieStop,  // leaf or missing edge; the program itself was fine
  kAbort,     // the evaluator aborted (see status)
};

struct CandidateResult {
  RunEnd end = RunEnd::kTrieStop;
  eval::Status status = eval::Status::kValue;
  std::vector<oeis::Solved> solved;
  uint32_t node = 0;
  uint32_t depth = 0;
  int64_t terms = 0;
  bool rerun_slow = false;
};

// Runs one program against the trie under `limits`.
CandidateResult CheckProgram(const lang::Expr& program, const oeis::SequenceTrie& trie,
                             const eval::EvalLimits& limits);

struct CheckReport {
  size_t checked = 0;       // candidates offered
  size_t unique = 0;        // distinct token strings
  size_t invalid = 0;       // not decodable
  size_t promoted = 0;      // hybrid re-runs under slow limits
  size_t solving = 0;       // unique candidates solving at least one sequence
  size_t new_solutions = 0; // sequences solved for the first time
  size_t improved_smallest = 0;
  size_t improved_fastest = 0;
  std::array<size_t, eval::kNumStatuses> aborts{};  // by status, first run
  std::vector<oeis::ANum> solved;                   // distinct, sorted
};

// Checks `pool` and offers every solution to `store` (tagged `iteration`).
// Results do not depend on `jobs` or on the order of `pool` beyond
// duplicates being collapsed.
CheckReport CheckPool(const std::vector<lang::TokenString>& pool, const oeis::SequenceTrie& trie,
                      const CheckConfig& config, SolutionStore& store, int iteration);

// Cost of producing exactly `terms` with `program`, or nullopt if it does
// not produce them under `limits`.
std::optional<int64_t> MeasureSpeed(const lang::Expr& program,
                                    const std::vector<Integer>& terms,
                                    const eval::EvalLimits& limits);

enum class GenClass { kGeneralizes, kMismatch, kTimeout };
std::string_view GenClassName(GenClass c);

struct GenRecord {
  oeis::ANum anum = 0;
  SolutionKind kind = SolutionKind::kSmallest;
  GenClass verdict = GenClass::kTimeout;
  size_t extension_terms = 0;
  size_t produced = 0;  // extension terms produced before the verdict
};

struct GenReport {
  std::vector<GenRecord> records;
  // [kind][class]
  std::array<std::array<size_t, 3>, 2> counts{};

  // generalizes / (generalizes + mismatch), or 0 when nothing was decided.
  double Percent(SolutionKind kind) const;
};

// For every solved sequence with a b-file, runs the smallest and fastest
// programs on the stored terms followed by up to `max_extra` b-file terms.
GenReport CheckGeneralization(const SolutionStore& store, const oeis::Corpus& corpus,
                              const std::map<oeis::ANum, oeis::BFile>& bfiles,
                              const eval::EvalLimits& limits, size_t max_extra = 100);

}  // namespace seqsynth::checker

#endif  // SEQSYNTH_CHECKER_HPP_
