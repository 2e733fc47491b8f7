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

#include "seqsynth/checker.hpp"

#include <algorithm>
#include <unordered_map>

#include "seqsynth/parallel.hpp"

namespace seqsynth::checker {

using eval::Status;
using lang::Expr;
using lang::TokenString;

std::string_view ModeName(CheckMode m) {
  switch (m) {
    case CheckMode::kFast:
      return "fast";
    case CheckMode::kSlow:
      return "slow";
    case CheckMode::kHybrid:
      return "hybrid";
  }
  return "?";
}

std::optional<CheckMode> ParseMode(std::string_view s) {
  if (s == "fast") return CheckMode::kFast;
  if (s == "slow") return CheckMode::kSlow;
  if (s == "hybrid") return CheckMode::kHybrid;
  return std::nullopt;
}

std::string_view GenClassName(GenClass c) {
  switch (c) {
    case GenClass::kGeneralizes:
      return "generalizes";
    case GenClass::kMismatch:
      return "mismatch";
    case GenClass::kTimeout:
      return "timeout";
  }
  return "?";
}

CandidateResult CheckProgram(const Expr& program, const oeis::SequenceTrie& trie,
                             const eval::EvalLimits& limits) {
  CandidateResult r;
  if (trie.IsLeaf(oeis::SequenceTrie::root())) return r;
  oeis::TrieWalker walker(trie);
  eval::RunResult run = eval::RunSequenceProgram(program, limits, [&](const eval::TermInfo& t) {
    return walker.Feed(t.value, t.total_cost);
  });
  oeis::MatchReport m = walker.Take();
  r.solved = std::move(m.solved);
  r.node = m.node;
  r.depth = m.depth;
  r.terms = run.terms;
  if (!run.stopped_by_consumer) {
    r.end = RunEnd::kAbort;
    r.status = run.final.status;
  }
  return r;
}

CheckReport CheckPool(const std::vector<TokenString>& pool, const oeis::SequenceTrie& trie,
                      const CheckConfig& config, SolutionStore& store, int iteration) {
  CheckReport report;
  report.checked = pool.size();
  std::vector<TokenString> unique(pool);
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  report.unique = unique.size();

  std::vector<std::optional<Expr>> programs(unique.size());
  for (size_t i = 0; i < unique.size(); ++i) {
    programs[i] = lang::TryDecode(unique[i]);
    if (!programs[i]) ++report.invalid;
  }

  const eval::EvalLimits& first =
      config.mode == CheckMode::kSlow ? config.slow : config.fast;
  std::vector<CandidateResult> results(unique.size());
  ParallelFor(unique.size(), config.jobs, [&](size_t i) {
    if (programs[i]) results[i] = CheckProgram(*programs[i], trie, first);
  });
  for (size_t i = 0; i < unique.size(); ++i) {
    if (programs[i] && results[i].end == RunEnd::kAbort) {
      ++report.aborts[static_cast<size_t>(results[i].status)];
    }
  }

  if (config.mode == CheckMode::kHybrid) {
    // Smallest promising candidate per trie node; `unique` is sorted, so the
    // first of minimal size is also the lexicographically smallest.
    std::unordered_map<uint32_t, size_t> best;
    for (size_t i = 0; i < unique.size(); ++i) {
      const CandidateResult& r = results[i];
      if (!programs[i] || r.end != RunEnd::kAbort) continue;
      if (r.status != Status::kTimeout && r.status != Status::kComprLimit) continue;
      if (r.depth < config.hybrid_min_depth) continue;
      auto [it, inserted] = best.emplace(r.node, i);
      if (!inserted && unique[i].size() < unique[it->second].size()) it->second = i;
    }
    std::vector<size_t> promoted;
    for (const auto& [node, i] : best) promoted.push_back(i);
    std::sort(promoted.begin(), promoted.end());
    report.promoted = promoted.size();
    ParallelFor(promoted.size(), config.jobs, [&](size_t k) {
      size_t i = promoted[k];
      results[i] = CheckProgram(*programs[i], trie, config.slow);
      results[i].rerun_slow = true;
    });
  }

  for (size_t i = 0; i < unique.size(); ++i) {
    const CandidateResult& r = results[i];
    if (r.solved.empty()) continue;
    ++report.solving;
    const int size = static_cast<int>(unique[i].size());
    for (const oeis::Solved& s : r.solved) {
      UpdateResult u = store.Offer(s.anum, Program{unique[i], size, s.cost}, iteration);
      report.new_solutions += u.is_new;
      report.improved_smallest += !u.is_new && u.smallest_changed;
      report.improved_fastest += !u.is_new && u.fastest_changed;
      report.solved.push_back(s.anum);
    }
  }
  std::sort(report.solved.begin(), report.solved.end());
  report.solved.erase(std::unique(report.solved.begin(), report.solved.end()),
                      report.solved.end());
  return report;
}

std::optional<int64_t> MeasureSpeed(const Expr& program, const std::vector<Integer>& terms,
                                    const eval::EvalLimits& limits) {
  if (terms.empty()) return 0;
  size_t matched = 0;
  int64_t cost = 0;
  bool mismatch = false;
  eval::RunSequenceProgram(program, limits, [&](const eval::TermInfo& t) {
    if (t.value != terms[matched]) {
      mismatch = true;
      return false;
    }
    ++matched;
    cost = t.total_cost;
    return matched < terms.size();
  });
  if (mismatch || matched < terms.size()) return std::nullopt;
  return cost;
}

double GenReport::Percent(SolutionKind kind) const {
  const auto& c = counts[static_cast<size_t>(kind)];
  size_t decided = c[0] + c[1];
  return decided == 0 ? 0.0 : 100.0 * static_cast<double>(c[0]) / static_cast<double>(decided);
}

GenReport CheckGeneralization(const SolutionStore& store, const oeis::Corpus& corpus,
                              const std::map<oeis::ANum, oeis::BFile>& bfiles,
                              const eval::EvalLimits& limits, size_t max_extra) {
  std::unordered_map<oeis::ANum, const oeis::SequenceEntry*> by_anum;
  for (const oeis::SequenceEntry& e : corpus) by_anum[e.anum] = &e;
  GenReport report;
  for (const auto& [anum, rec] : store.records()) {
    auto b = bfiles.find(anum);
    auto s = by_anum.find(anum);
    if (b == bfiles.end() || s == by_anum.end()) continue;
    const std::vector<Integer>& stored = s->second->terms;
    std::vector<Integer> ext = b->second.Extension(stored.size());
    if (ext.size() > max_extra) ext.resize(max_extra);
    if (ext.empty()) continue;
    for (SolutionKind kind : {SolutionKind::kSmallest, SolutionKind::kFastest}) {
      const Program& p = kind == SolutionKind::kSmallest ? rec.smallest : rec.fastest;
      GenRecord g;
      g.anum = anum;
      g.kind = kind;
      g.extension_terms = ext.size();
      auto expr = lang::TryDecode(p.tokens);
      if (!expr) {
        g.verdict = GenClass::kMismatch;
      } else {
        const size_t total = stored.size() + ext.size();
        bool mismatch = false;
        size_t produced = 0;
        eval::RunSequenceProgram(*expr, limits, [&](const eval::TermInfo& t) {
          size_t i = static_cast<size_t>(t.index);
          const Integer& want = i < stored.size() ? stored[i] : ext[i - stored.size()];
          if (t.value != want) {
            mismatch = true;
            return false;
          }
          produced = i + 1;
          return produced < total;
        });
        g.produced = produced > stored.size() ? produced - stored.size() : 0;
        if (mismatch) {
          g.verdict = GenClass::kMismatch;
        } else if (produced == total) {
          g.verdict = GenClass::kGeneralizes;
        } else {
          g.verdict = GenClass::kTimeout;
        }
      }
      ++report.counts[static_cast<size_t>(kind)][static_cast<size_t>(g.verdict)];
      report.records.push_back(g);
    }
  }
  return report;
}

}  // namespace seqsynth::checker
