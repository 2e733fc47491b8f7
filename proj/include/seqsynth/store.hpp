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

#ifndef SEQSYNTH_STORE_HPP_
#define SEQSYNTH_STORE_HPP_

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seqsynth/lang.hpp"
#include "seqsynth/oeis.hpp"

namespace seqsynth {

struct Program {
  lang::TokenString tokens;
  int size = 0;
  int64_t speed = 0;

  friend bool operator==(const Program&, const Program&) = default;
};

// Strict orders used by the store: size first (then speed, then tokens) and
// speed first (then size, then tokens).
bool SmallerThan(const Program& a, const Program& b);
bool FasterThan(const Program& a, const Program& b);

enum class SolutionKind { kSmallest, kFastest };
std::string_view KindName(SolutionKind k);
std::optional<SolutionKind> ParseKind(std::string_view s);

struct SolutionRecord {
  Program smallest;
  Program fastest;
  int first_iteration = 0;
};

struct UpdateResult {
  bool is_new = false;
  bool smallest_changed = false;
  bool fastest_changed = false;
};

// One change to the store, in the order it happened.
struct JournalEvent {
  int iteration = 0;
  oeis::ANum anum = 0;
  SolutionKind kind = SolutionKind::kSmallest;
  Program program;
};

std::string FormatJournalEvent(const JournalEvent& e);
// Throws std::runtime_error on malformed lines.
JournalEvent ParseJournalEvent(const std::string& line);
std::vector<JournalEvent> ReadJournal(std::istream& in);
std::vector<JournalEvent> LoadJournal(const std::string& path);

class SolutionStore {
 public:
  // Offers a program that produces the stored terms of `anum`.
  UpdateResult Offer(oeis::ANum anum, const Program& p, int iteration);

  const std::map<oeis::ANum, SolutionRecord>& records() const { return records_; }
  const SolutionRecord* Find(oeis::ANum anum) const;
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Changes since the last call.
  std::vector<JournalEvent> TakeEvents();

  // Re-measures every stored program with `measure` (which returns nullopt
  // when the program no longer produces the sequence; such entries keep
  // their old speed). The fastest slot is re-chosen among the two programs.
  // Changed slots are recorded as events of `iteration`.
  void Remeasure(const std::function<std::optional<int64_t>(oeis::ANum, const Program&)>& measure,
                 int iteration);

  // Snapshot: "ANUM\tSIZE\tSPEED\tKIND\tTOKENS", smallest line first.
  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;
  static SolutionStore Read(std::istream& in);
  static SolutionStore Load(const std::string& path);

  // Replays journal events (latest state wins per slot).
  static SolutionStore Replay(const std::vector<JournalEvent>& events);

  friend bool operator==(const SolutionStore& a, const SolutionStore& b);

 private:
  std::map<oeis::ANum, SolutionRecord> records_;
  std::vector<JournalEvent> pending_;
};

}  // namespace seqsynth

#endif  // SEQSYNTH_STORE_HPP_
