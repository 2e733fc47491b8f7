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

#include "seqsynth/store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seqsynth {

bool SmallerThan(const Program& a, const Program& b) {
  if (a.size != b.size) return a.size < b.size;
  if (a.speed != b.speed) return a.speed < b.speed;
  return a.tokens < b.tokens;
}

bool FasterThan(const Program& a, const Program& b) {
  if (a.speed != b.speed) return a.speed < b.speed;
  if (a.size != b.size) return a.size < b.size;
  return a.tokens < b.tokens;
}

std::string_view KindName(SolutionKind k) {
  return k == SolutionKind::kSmallest ? "smallest" : "fastest";
}

std::optional<SolutionKind> ParseKind(std::string_view s) {
  if (s == "smallest") return SolutionKind::kSmallest;
  if (s == "fastest") return SolutionKind::kFastest;
  return std::nullopt;
}

namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == '\t') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back().push_back(c);
    }
  }
  return out;
}

// Fields: ANUM SIZE SPEED KIND TOKENS
void ParseProgramFields(const std::vector<std::string>& f, size_t at, oeis::ANum& anum,
                        SolutionKind& kind, Program& p) {
  anum = oeis::ParseANum(f[at]);
  p.size = std::stoi(f[at + 1]);
  p.speed = std::stoll(f[at + 2]);
  auto k = ParseKind(f[at + 3]);
  if (!k) throw std::runtime_error("bad solution kind '" + f[at + 3] + "'");
  kind = *k;
  p.tokens = lang::TokenString::Parse(f[at + 4]);
  if (static_cast<int>(p.tokens.size()) != p.size) {
    throw std::runtime_error("size column does not match program length");
  }
}

}  // namespace

std::string FormatJournalEvent(const JournalEvent& e) {
  std::ostringstream os;
  os << e.iteration << '\t' << oeis::FormatANum(e.anum) << '\t' << e.program.size << '\t'
     << e.program.speed << '\t' << KindName(e.kind) << '\t' << e.program.tokens.str();
  return os.str();
}

JournalEvent ParseJournalEvent(const std::string& line) {
  std::vector<std::string> f = SplitTabs(line);
  if (f.size() != 6) throw std::runtime_error("journal line needs 6 fields: " + line);
  JournalEvent e;
  try {
    e.iteration = std::stoi(f[0]);
    ParseProgramFields(f, 1, e.anum, e.kind, e.program);
  } catch (const std::logic_error&) {
    throw std::runtime_error("malformed journal line: " + line);
  }
  return e;
}

std::vector<JournalEvent> ReadJournal(std::istream& in) {
  std::vector<JournalEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(ParseJournalEvent(line));
  }
  return out;
}

std::vector<JournalEvent> LoadJournal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open journal " + path);
  return ReadJournal(in);
}

UpdateResult SolutionStore::Offer(oeis::ANum anum, const Program& p, int iteration) {
  UpdateResult r;
  auto it = records_.find(anum);
  if (it == records_.end()) {
    records_.emplace(anum, SolutionRecord{p, p, iteration});
    r.is_new = r.smallest_changed = r.fastest_changed = true;
  } else {
    SolutionRecord& rec = it->second;
    if (SmallerThan(p, rec.smallest)) {
      rec.smallest = p;
      r.smallest_changed = true;
    }
    if (FasterThan(p, rec.fastest)) {
      rec.fastest = p;
      r.fastest_changed = true;
    }
  }
  if (r.smallest_changed) pending_.push_back({iteration, anum, SolutionKind::kSmallest, p});
  if (r.fastest_changed) pending_.push_back({iteration, anum, SolutionKind::kFastest, p});
  return r;
}

const SolutionRecord* SolutionStore::Find(oeis::ANum anum) const {
  auto it = records_.find(anum);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<JournalEvent> SolutionStore::TakeEvents() {
  std::vector<JournalEvent> out;
  out.swap(pending_);
  return out;
}

void SolutionStore::Remeasure(
    const std::function<std::optional<int64_t>(oeis::ANum, const Program&)>& measure,
    int iteration) {
  for (auto& [anum, rec] : records_) {
    const SolutionRecord before = rec;
    if (auto s = measure(anum, rec.smallest)) rec.smallest.speed = *s;
    if (rec.fastest.tokens == rec.smallest.tokens) {
      rec.fastest.speed = rec.smallest.speed;
    } else if (auto f = measure(anum, rec.fastest)) {
      rec.fastest.speed = *f;
    }
    // Speeds moved, so the two slots may now be ordered differently.
    if (FasterThan(rec.smallest, rec.fastest)) rec.fastest = rec.smallest;
    if (!(rec.smallest == before.smallest)) {
      pending_.push_back({iteration, anum, SolutionKind::kSmallest, rec.smallest});
    }
    if (!(rec.fastest == before.fastest)) {
      pending_.push_back({iteration, anum, SolutionKind::kFastest, rec.fastest});
    }
  }
}

void SolutionStore::Write(std::ostream& out) const {
  for (const auto& [anum, rec] : records_) {
    for (SolutionKind k : {SolutionKind::kSmallest, SolutionKind::kFastest}) {
      const Program& p = k == SolutionKind::kSmallest ? rec.smallest : rec.fastest;
      out << oeis::FormatANum(anum) << '\t' << p.size << '\t' << p.speed << '\t'
          << KindName(k) << '\t' << p.tokens.str() << '\n';
    }
  }
}

void SolutionStore::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  Write(out);
}

SolutionStore SolutionStore::Read(std::istream& in) {
  SolutionStore store;
  std::map<oeis::ANum, std::pair<bool, bool>> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 5) {
      throw std::runtime_error("solutions line " + std::to_string(lineno) + ": expected 5 fields");
    }
    oeis::ANum anum;
    SolutionKind kind;
    Program p;
    try {
      ParseProgramFields(f, 0, anum, kind, p);
    } catch (const std::logic_error&) {
      throw std::runtime_error("solutions line " + std::to_string(lineno) + ": malformed");
    }
    SolutionRecord& rec = store.records_[anum];
    auto& flags = seen[anum];
    if (kind == SolutionKind::kSmallest) {
      rec.smallest = p;
      flags.first = true;
    } else {
      rec.fastest = p;
      flags.second = true;
    }
  }
  for (const auto& [anum, flags] : seen) {
    if (!flags.first || !flags.second) {
      throw std::runtime_error(oeis::FormatANum(anum) + " lacks a smallest or fastest entry");
    }
  }
  return store;
}

SolutionStore SolutionStore::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Read(in);
}

SolutionStore SolutionStore::Replay(const std::vector<JournalEvent>& events) {
  SolutionStore store;
  for (const JournalEvent& e : events) {
    auto [it, inserted] = store.records_.try_emplace(e.anum);
    if (inserted) it->second = SolutionRecord{e.program, e.program, e.iteration};
    if (e.kind == SolutionKind::kSmallest) {
      it->second.smallest = e.program;
    } else {
      it->second.fastest = e.program;
    }
  }
  return store;
}

bool operator==(const SolutionStore& a, const SolutionStore& b) {
  if (a.records_.size() != b.records_.size()) return false;
  auto i = a.records_.begin();
  auto j = b.records_.begin();
  for (; i != a.records_.end(); ++i, ++j) {
    if (i->first != j->first || !(i->second.smallest == j->second.smallest) ||
        !(i->second.fastest == j->second.fastest)) {
      return false;
    }
  }
  return true;
}

}  // namespace seqsynth
