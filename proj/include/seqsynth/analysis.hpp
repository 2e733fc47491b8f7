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


// Statistics over the history of a run: how average size and speed evolve,
// how solutions shrink after discovery, how subprograms spread through the
// store, and which linear loop bounds appear.

#ifndef SEQSYNTH_ANALYSIS_HPP_
#define SEQSYNTH_ANALYSIS_HPP_

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seqsynth/lang.hpp"
#include "seqsynth/store.hpp"

namespace seqsynth::analysis {

struct HistorySnapshot {
  int iteration = 0;
  SolutionStore store;
};
using History = std::vector<HistorySnapshot>;  // ordered by iteration

// Snapshots from the iteration directories of a run (iter_NNN/solutions.tsv).
History LoadHistory(const std::string& run_dir);
// Snapshots rebuilt by replaying journal events up to each iteration in
// `iterations`.
History HistoryFromJournal(const std::vector<JournalEvent>& events,
                           const std::vector<int>& iterations);

struct EvolutionPoint {
  int iteration = 0;
  size_t solutions = 0;
  double avg_size = 0;   // over smallest programs
  double avg_speed = 0;  // over fastest programs
};

std::vector<EvolutionPoint> EvolutionCurves(const History& history);
// Same statistics computed directly from journal events, without building
// stores.
std::vector<EvolutionPoint> EvolutionFromJournal(const std::vector<JournalEvent>& events,
                                                 const std::vector<int>& iterations);

struct ReductionPoint {
  int offset = 0;        // iterations since first solved
  size_t sequences = 0;  // sequences with a snapshot at this offset
  double size_ratio = 1;
  double speed_ratio = 1;
};

// For every sequence, size(t) / size(0) and speed(t) / speed(0) with t = 0 at
// the first snapshot containing it, averaged over sequences, t <= horizon.
std::vector<ReductionPoint> ReductionAfterDiscovery(const History& history, int horizon = 100);

enum class MatchMode { kTokens, kSubtree };

struct CensusRow {
  int iteration = 0;
  std::vector<size_t> counts;  // one per pattern
};

// Number of solved sequences whose smallest or fastest program contains each
// pattern (contiguous tokens, or as a whole subtree).
std::vector<CensusRow> ProliferationCensus(const History& history,
                                           const std::vector<lang::TokenString>& patterns,
                                           MatchMode mode = MatchMode::kTokens);
bool ContainsSubtree(const lang::Expr& program, const lang::Expr& pattern);

enum class BoundForm { kLinear, kDoubled };  // a + v/b and a + 2(v/b)

struct BoundOccurrence {
  oeis::ANum anum = 0;
  SolutionKind kind = SolutionKind::kSmallest;
  int64_t a = 0;
  int64_t b = 0;
  BoundForm form = BoundForm::kLinear;
  char variable = 'x';
  bool valid = false;
};

// Subtrees of the shape a + v/b or a + 2(v/b) (either operand order of + and
// *, v one of x and y, a and b variable-free) in the store's programs.
std::vector<BoundOccurrence> LinearBoundCensus(const SolutionStore& store);
// The bound is at least the number of subtraction steps floor(sqrt(2v + 1/4)
// - 1/2) for every v in [0, max_v], checked in integer arithmetic.
bool BoundIsValid(int64_t a, int64_t b, BoundForm form, int64_t max_v = 1000000);
// Matches one subtree (not its children).
std::optional<BoundOccurrence> MatchBound(const lang::Expr& e);

void WriteEvolutionCsv(std::ostream& out, const std::vector<EvolutionPoint>& points);
void WriteReductionCsv(std::ostream& out, const std::vector<ReductionPoint>& points);
void WriteCensusCsv(std::ostream& out, const std::vector<CensusRow>& rows,
                    const std::vector<std::string>& names);
void WriteBoundsCsv(std::ostream& out, const std::vector<BoundOccurrence>& bounds);
// Gnuplot scripts reading the CSV files above from the same directory.
void WritePlotScripts(const std::string& dir);

}  // namespace seqsynth::analysis

#endif  // SEQSYNTH_ANALYSIS_HPP_
