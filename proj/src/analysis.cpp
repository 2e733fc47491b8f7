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


#include "seqsynth/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <regex>
#include <stdexcept>
#include <tuple>

#include "seqsynth/eval.hpp"

namespace seqsynth::analysis {

namespace fs = std::filesystem;
using lang::Expr;
using lang::Op;
using lang::TokenString;

History LoadHistory(const std::string& run_dir) {
  std::vector<std::pair<int, fs::path>> dirs;
  const std::regex name("iter_([0-9]+)");
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    std::smatch m;
    const std::string fname = entry.path().filename().string();
    if (!entry.is_directory() || !std::regex_match(fname, m, name)) continue;
    if (!fs::exists(entry.path() / "solutions.tsv")) continue;
    dirs.emplace_back(std::stoi(m[1]), entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  History h;
  for (const auto& [it, path] : dirs) {
    h.push_back({it, SolutionStore::Load((path / "solutions.tsv").string())});
  }
  return h;
}

History HistoryFromJournal(const std::vector<JournalEvent>& events,
                           const std::vector<int>& iterations) {
  History h;
  for (int it : iterations) {
    std::vector<JournalEvent> upto;
    for (const JournalEvent& e : events) {
      if (e.iteration <= it) upto.push_back(e);
    }
    h.push_back({it, SolutionStore::Replay(upto)});
  }
  return h;
}

std::vector<EvolutionPoint> EvolutionCurves(const History& history) {
  std::vector<EvolutionPoint> out;
  for (const HistorySnapshot& s : history) {
    EvolutionPoint p;
    p.iteration = s.iteration;
    p.solutions = s.store.size();
    double size = 0, speed = 0;
    for (const auto& [anum, rec] : s.store.records()) {
      size += rec.smallest.size;
      speed += static_cast<double>(rec.fastest.speed);
    }
    if (p.solutions > 0) {
      p.avg_size = size / static_cast<double>(p.solutions);
      p.avg_speed = speed / static_cast<double>(p.solutions);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<EvolutionPoint> EvolutionFromJournal(const std::vector<JournalEvent>& events,
                                                 const std::vector<int>& iterations) {
  std::vector<int> its(iterations);
  std::sort(its.begin(), its.end());
  std::vector<const JournalEvent*> ordered;
  for (const JournalEvent& e : events) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const JournalEvent* a, const JournalEvent* b) { return a->iteration < b->iteration; });
  std::map<oeis::ANum, std::pair<int, int64_t>> current;  // smallest size, fastest speed
  std::vector<EvolutionPoint> out;
  size_t next = 0;
  for (int it : its) {
    for (; next < ordered.size() && ordered[next]->iteration <= it; ++next) {
      const JournalEvent& e = *ordered[next];
      auto [slot, inserted] = current.try_emplace(e.anum, e.program.size, e.program.speed);
      if (e.kind == SolutionKind::kSmallest) {
        slot->second.first = e.program.size;
      } else {
        slot->second.second = e.program.speed;
      }
    }
    EvolutionPoint p;
    p.iteration = it;
    p.solutions = current.size();
    double size = 0, speed = 0;
    for (const auto& [anum, v] : current) {
      size += v.first;
      speed += static_cast<double>(v.second);
    }
    if (p.solutions > 0) {
      p.avg_size = size / static_cast<double>(p.solutions);
      p.avg_speed = speed / static_cast<double>(p.solutions);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<ReductionPoint> ReductionAfterDiscovery(const History& history, int horizon) {
  std::map<int, const SolutionStore*> by_iteration;
  for (const HistorySnapshot& s : history) by_iteration[s.iteration] = &s.store;
  std::map<oeis::ANum, int> first;
  for (const auto& [it, store] : by_iteration) {
    for (const auto& [anum, rec] : store->records()) first.try_emplace(anum, it);
  }
  std::vector<double> size_sum(static_cast<size_t>(horizon) + 1, 0.0);
  std::vector<double> speed_sum(size_sum.size(), 0.0);
  std::vector<size_t> count(size_sum.size(), 0);
  for (const auto& [anum, f] : first) {
    const SolutionRecord* base = by_iteration.at(f)->Find(anum);
    for (int t = 0; t <= horizon; ++t) {
      auto it = by_iteration.find(f + t);
      if (it == by_iteration.end()) continue;
      const SolutionRecord* now = it->second->Find(anum);
      if (!now) continue;
      const size_t k = static_cast<size_t>(t);
      size_sum[k] += static_cast<double>(now->smallest.size) / base->smallest.size;
      speed_sum[k] += base->fastest.speed > 0
                          ? static_cast<double>(now->fastest.speed) /
                                static_cast<double>(base->fastest.speed)
                          : 1.0;
      ++count[k];
    }
  }
  std::vector<ReductionPoint> out;
  for (size_t k = 0; k < count.size(); ++k) {
    if (count[k] == 0) continue;
    const double n = static_cast<double>(count[k]);
    // t = 0 is the reference itself.
    out.push_back({static_cast<int>(k), count[k], k == 0 ? 1.0 : size_sum[k] / n,
                   k == 0 ? 1.0 : speed_sum[k] / n});
  }
  return out;
}

bool ContainsSubtree(const Expr& program, const Expr& pattern) {
  if (program == pattern) return true;
  for (const Expr& a : program.args) {
    if (ContainsSubtree(a, pattern)) return true;
  }
  return false;
}

std::vector<CensusRow> ProliferationCensus(const History& history,
                                           const std::vector<TokenString>& patterns,
                                           MatchMode mode) {
  std::vector<std::optional<Expr>> pattern_exprs;
  for (const TokenString& p : patterns) pattern_exprs.push_back(lang::TryDecode(p));
  std::vector<CensusRow> rows;
  for (const HistorySnapshot& s : history) {
    CensusRow row;
    row.iteration = s.iteration;
    row.counts.assign(patterns.size(), 0);
    for (const auto& [anum, rec] : s.store.records()) {
      const TokenString* progs[2] = {&rec.smallest.tokens, &rec.fastest.tokens};
      std::optional<Expr> exprs[2];
      if (mode == MatchMode::kSubtree) {
        exprs[0] = lang::TryDecode(*progs[0]);
        exprs[1] = lang::TryDecode(*progs[1]);
      }
      for (size_t i = 0; i < patterns.size(); ++i) {
        bool hit = false;
        for (int k = 0; k < 2 && !hit; ++k) {
          if (mode == MatchMode::kTokens) {
            hit = progs[k]->compact().find(patterns[i].compact()) != std::string::npos;
          } else {
            hit = exprs[k] && pattern_exprs[i] && ContainsSubtree(*exprs[k], *pattern_exprs[i]);
          }
        }
        row.counts[i] += hit;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Whether x or y occurs outside the function arguments of loop, loop2 and
// compr (where they are bound).
bool HasFreeVariable(const Expr& e) {
  switch (e.op) {
    case Op::kX:
    case Op::kY:
      return true;
    case Op::kLoop:
      return HasFreeVariable(e.args[1]) || HasFreeVariable(e.args[2]);
    case Op::kLoop2:
      return HasFreeVariable(e.args[2]) || HasFreeVariable(e.args[3]) || HasFreeVariable(e.args[4]);
    case Op::kCompr:
      return HasFreeVariable(e.args[1]);
    default:
      for (const Expr& a : e.args) {
        if (HasFreeVariable(a)) return true;
      }
      return false;
  }
}

std::optional<int64_t> ConstantValue(const Expr& e) {
  if (HasFreeVariable(e)) return std::nullopt;
  eval::EvalOutcome r = eval::EvalExpr(e, Integer(0), Integer(0), eval::EvalLimits::Fast());
  if (!r.ok() || !r.value.is_small()) return std::nullopt;
  return r.value.small_value();
}

// v / b with v a variable and b a positive constant.
bool MatchQuotient(const Expr& e, char& var, int64_t& b) {
  if (e.op != Op::kDiv) return false;
  const Expr& num = e.args[0];
  if (num.op != Op::kX && num.op != Op::kY) return false;
  auto c = ConstantValue(e.args[1]);
  if (!c || *c <= 0) return false;
  var = num.op == Op::kX ? 'x' : 'y';
  b = *c;
  return true;
}

int64_t Steps(int64_t v) {
  // Largest k with k(k+1)/2 <= v.
  auto k = static_cast<int64_t>((std::sqrt(8.0 * static_cast<double>(v) + 1.0) - 1.0) / 2.0);
  while (k > 0 && k * (k + 1) / 2 > v) --k;
  while ((k + 1) * (k + 2) / 2 <= v) ++k;
  return k;
}

}  // namespace

bool BoundIsValid(int64_t a, int64_t b, BoundForm form, int64_t max_v) {
  if (b <= 0) return false;
  const int64_t mul = form == BoundForm::kDoubled ? 2 : 1;
  for (int64_t v = 0; v <= max_v; ++v) {
    if (a + mul * (v / b) < Steps(v)) return false;
  }
  return true;
}

std::optional<BoundOccurrence> MatchBound(const Expr& e) {
  if (e.op != Op::kPlus) return std::nullopt;
  for (int order = 0; order < 2; ++order) {
    const Expr& lhs = e.args[static_cast<size_t>(order)];
    const Expr& rhs = e.args[static_cast<size_t>(1 - order)];
    auto a = ConstantValue(lhs);
    if (!a) continue;
    BoundOccurrence occ;
    occ.a = *a;
    if (MatchQuotient(rhs, occ.variable, occ.b)) {
      occ.form = BoundForm::kLinear;
      return occ;
    }
    if (rhs.op == Op::kTimes) {
      for (int k = 0; k < 2; ++k) {
        auto two = ConstantValue(rhs.args[static_cast<size_t>(k)]);
        if (two && *two == 2 && MatchQuotient(rhs.args[static_cast<size_t>(1 - k)], occ.variable, occ.b)) {
          occ.form = BoundForm::kDoubled;
          return occ;
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<BoundOccurrence> LinearBoundCensus(const SolutionStore& store) {
  std::map<std::tuple<int64_t, int64_t, int>, bool> validity;
  std::vector<BoundOccurrence> out;
  std::function<void(const Expr&, oeis::ANum, SolutionKind)> walk = [&](const Expr& e, oeis::ANum anum,
                                                                        SolutionKind kind) {
    if (auto occ = MatchBound(e)) {
      occ->anum = anum;
      occ->kind = kind;
      auto key = std::make_tuple(occ->a, occ->b, static_cast<int>(occ->form));
      auto it = validity.find(key);
      if (it == validity.end()) it = validity.emplace(key, BoundIsValid(occ->a, occ->b, occ->form)).first;
      occ->valid = it->second;
      out.push_back(*occ);
    }
    for (const Expr& a : e.args) walk(a, anum, kind);
  };
  for (const auto& [anum, rec] : store.records()) {
    if (auto e = lang::TryDecode(rec.smallest.tokens)) walk(*e, anum, SolutionKind::kSmallest);
    if (rec.fastest.tokens == rec.smallest.tokens) continue;
    if (auto e = lang::TryDecode(rec.fastest.tokens)) walk(*e, anum, SolutionKind::kFastest);
  }
  return out;
}

void WriteEvolutionCsv(std::ostream& out, const std::vector<EvolutionPoint>& points) {
  out << "iteration,solutions,avg_size,avg_speed\n" << std::setprecision(10);
  for (const EvolutionPoint& p : points) {
    out << p.iteration << ',' << p.solutions << ',' << p.avg_size << ',' << p.avg_speed << '\n';
  }
}

void WriteReductionCsv(std::ostream& out, const std::vector<ReductionPoint>& points) {
  out << "offset,sequences,size_ratio,speed_ratio\n" << std::setprecision(10);
  for (const ReductionPoint& p : points) {
    out << p.offset << ',' << p.sequences << ',' << p.size_ratio << ',' << p.speed_ratio << '\n';
  }
}

void WriteCensusCsv(std::ostream& out, const std::vector<CensusRow>& rows,
                    const std::vector<std::string>& names) {
  out << "iteration";
  for (const std::string& n : names) out << ',' << n;
  out << '\n';
  for (const CensusRow& r : rows) {
    out << r.iteration;
    for (size_t c : r.counts) out << ',' << c;
    out << '\n';
  }
}

void WriteBoundsCsv(std::ostream& out, const std::vector<BoundOccurrence>& bounds) {
  out << "anum,kind,form,variable,a,b,valid\n";
  for (const BoundOccurrence& b : bounds) {
    out << oeis::FormatANum(b.anum) << ',' << KindName(b.kind) << ','
        << (b.form == BoundForm::kLinear ? "a+v/b" : "a+2(v/b)") << ',' << b.variable << ','
        << b.a << ',' << b.b << ',' << (b.valid ? 1 : 0) << '\n';
  }
}

void WritePlotScripts(const std::string& dir) {
  const fs::path d(dir);
  std::ofstream(d / "evolution.gp")
      << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'iteration'\n"
         "set terminal pngcairo size 800,500\n"
         "set output 'avg_size.png'\nplot 'evolution.csv' using 1:3 with linespoints\n"
         "set output 'avg_speed.png'\nplot 'evolution.csv' using 1:4 with linespoints\n";
  std::ofstream(d / "reduction.gp")
      << "set datafile separator ','\nset key autotitle columnhead\n"
         "set xlabel 'iterations after first solution'\nset yrange [0:1.05]\n"
         "set terminal pngcairo size 800,500\n"
         "set output 'size_reduction.png'\nplot 'reduction.csv' using 1:3 with lines\n"
         "set output 'speed_reduction.png'\nplot 'reduction.csv' using 1:4 with lines\n";
  std::ofstream(d / "bounds.gp")
      << "set datafile separator ','\nset xlabel 'b'\nset ylabel 'a'\n"
         "set terminal pngcairo size 800,500\nset output 'bounds.png'\n"
         "plot 'bounds.csv' every ::1 using ($7==1 ? $6 : 1/0):5 title 'valid' with points pt 7, \\\n"
         "     'bounds.csv' every ::1 using ($7==0 ? $6 : 1/0):5 title 'invalid' with points pt 6\n";
}

}  // namespace seqsynth::analysis
