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


#include "seqsynth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "seqsynth/eval.hpp"

namespace seqsynth::synth {

using lang::Expr;
using lang::Op;
using lang::TokenString;
using lang::UnitCode;

uint64_t Rng::Below(uint64_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

double Rng::Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

uint64_t SplitMix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b) {
  return SplitMix(SplitMix(SplitMix(seed) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

// ---- random programs ----

namespace {

class RandomTreeGen {
 public:
  RandomTreeGen(const RandomConfig& config, uint64_t seed) : rng_(seed) {
    weights_ = config.weights;
    if (weights_.empty()) weights_.assign(lang::kNumOps, 1.0);
    if (weights_.size() != lang::kNumOps) {
      throw std::invalid_argument("operator weights need one entry per operator");
    }
    total_ = 0;
    for (double w : weights_) {
      if (!(w >= 0)) throw std::invalid_argument("operator weights must be nonnegative");
      total_ += w;
    }
    bool any_leaf = false;
    for (int i = 0; i < lang::kNumOps; ++i) {
      any_leaf |= lang::kArity[i] == 0 && weights_[i] > 0;
    }
    if (!any_leaf) throw std::invalid_argument("operator weights exclude every leaf");
  }

  Expr Generate(int budget) {
    Op op = Draw();
    // Resample until the operator and one leaf per argument fit.
    while (1 + lang::Arity(op) > budget) op = Draw();
    const int arity = lang::Arity(op);
    std::vector<Expr> args;
    int remaining = budget - 1;
    for (int i = 0; i < arity; ++i) {
      const int reserve = arity - i - 1;
      const int share = 1 + static_cast<int>(rng_.Below(static_cast<uint64_t>(remaining - reserve)));
      args.push_back(Generate(share));
      remaining -= lang::ProgramSize(args.back());
    }
    return Expr(op, std::move(args));
  }

  Rng& rng() { return rng_; }

 private:
  Op Draw() {
    double r = rng_.Unit() * total_;
    for (int i = 0; i < lang::kNumOps; ++i) {
      r -= weights_[i];
      if (r < 0 && weights_[i] > 0) return static_cast<Op>(i);
    }
    for (int i = lang::kNumOps - 1; i >= 0; --i) {
      if (weights_[i] > 0) return static_cast<Op>(i);
    }
    return Op::kZero;
  }

  Rng rng_;
  std::vector<double> weights_;
  double total_ = 0;
};

}  // namespace

std::vector<TokenString> RandomPrograms(size_t count, const RandomConfig& config, uint64_t seed) {
  if (config.max_size < 1) throw std::invalid_argument("max_size must be positive");
  RandomTreeGen gen(config, seed);
  std::vector<TokenString> out;
  std::unordered_set<TokenString, lang::TokenStringHash> seen;
  const size_t attempts = count * 50 + 1000;
  for (size_t a = 0; a < attempts && out.size() < count; ++a) {
    const int budget = 1 + static_cast<int>(gen.rng().Below(static_cast<uint64_t>(config.max_size)));
    TokenString t = lang::Encode(gen.Generate(budget));
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

// ---- training pairs ----

std::string RenderSource(const std::vector<Integer>& terms, size_t max_tokens) {
  std::vector<char> tokens;
  for (const Integer& v : terms) {
    std::string digits = v.to_string();
    std::vector<char> term;
    if (!tokens.empty()) term.push_back(kSourceSeparator);
    size_t start = 0;
    if (digits[0] == '-') {
      term.push_back(kSourceMinus);
      start = 1;
    }
    for (size_t i = digits.size(); i > start; --i) term.push_back(digits[i - 1]);
    if (tokens.size() + term.size() > max_tokens) break;
    tokens.insert(tokens.end(), term.begin(), term.end());
  }
  std::string out;
  for (char c : tokens) {
    if (!out.empty()) out.push_back(' ');
    out.push_back(c);
  }
  return out;
}

std::vector<Integer> ParseSource(std::string_view source) {
  std::vector<Integer> out;
  std::istringstream in{std::string(source)};
  std::string tok;
  std::string group;
  bool negative = false;
  bool any = false;
  auto flush = [&] {
    if (group.empty()) throw std::invalid_argument("empty integer in source");
    std::string natural(group.rbegin(), group.rend());
    if (natural.size() > 1 && natural[0] == '0') {
      throw std::invalid_argument("leading zero in source integer");
    }
    if (negative && natural == "0") throw std::invalid_argument("negative zero in source");
    out.push_back(Integer::Parse((negative ? "-" : "") + natural));
    group.clear();
    negative = false;
  };
  while (in >> tok) {
    if (tok.size() != 1) throw std::invalid_argument("source token '" + tok + "'");
    const char c = tok[0];
    any = true;
    if (c == kSourceSeparator) {
      flush();
    } else if (c == kSourceMinus) {
      if (negative || !group.empty()) throw std::invalid_argument("misplaced minus in source");
      negative = true;
    } else if (c >= '0' && c <= '9') {
      group.push_back(c);
    } else {
      throw std::invalid_argument("source token '" + tok + "'");
    }
  }
  if (any) flush();
  return out;
}

TokenString LocalAbstract(const TokenString& plain, int max_macros) {
  std::string body = plain.compact();
  std::vector<std::string> defs;
  const int limit = std::min(max_macros, lang::kMaxLocalMacros);
  for (int k = 0; k < limit; ++k) {
    // Best substring by savings, then length, then token order.
    std::string best;
    long best_gain = 0;
    const size_t max_len = std::min<size_t>(body.size() / 2, 16);
    for (size_t len = 2; len <= max_len; ++len) {
      std::map<std::string, std::pair<long, size_t>> occ;  // count, end of last
      for (size_t i = 0; i + len <= body.size(); ++i) {
        auto& [count, end] = occ[body.substr(i, len)];
        if (count == 0 || i >= end) {
          ++count;
          end = i + len;
        }
      }
      for (const auto& [s, ce] : occ) {
        const long gain = ce.first * static_cast<long>(len - 1) - static_cast<long>(len + 1);
        if (gain > best_gain || (gain == best_gain && gain > 0 &&
                                 (s.size() > best.size() || (s.size() == best.size() && s < best)))) {
          best_gain = gain;
          best = s;
        }
      }
    }
    if (best_gain <= 0) break;
    const char glyph = static_cast<char>(lang::kLocalMacroFirst + k);
    std::string next;
    for (size_t i = 0; i < body.size();) {
      if (body.compare(i, best.size(), best) == 0) {
        next.push_back(glyph);
        i += best.size();
      } else {
        next.push_back(body[i++]);
      }
    }
    body = std::move(next);
    defs.push_back(best);
  }
  if (defs.empty()) return plain;
  std::string out;
  for (const std::string& d : defs) {
    out += d;
    out.push_back(lang::kLocalSeparator);
  }
  out += body;
  return TokenString(std::move(out));
}

std::vector<TrainingPair> MakeTrainingPairs(const SolutionStore& store, const oeis::Corpus& corpus,
                                            TargetForm form, const lang::GlobalMacroTable* table,
                                            size_t max_source_tokens) {
  std::unordered_map<oeis::ANum, const oeis::SequenceEntry*> by_anum;
  for (const oeis::SequenceEntry& e : corpus) by_anum[e.anum] = &e;
  std::vector<TrainingPair> pairs;
  for (const auto& [anum, rec] : store.records()) {
    auto it = by_anum.find(anum);
    if (it == by_anum.end()) continue;
    const std::string src = RenderSource(it->second->terms, max_source_tokens);
    for (const TokenString* t : {&rec.smallest.tokens, &rec.fastest.tokens}) {
      if (t == &rec.fastest.tokens && rec.fastest.tokens == rec.smallest.tokens) continue;
      TokenString target = *t;
      if (form == TargetForm::kGlobalMacros && table) target = lang::AbstractReplace(target, *table);
      if (form == TargetForm::kLocalMacros) target = LocalAbstract(target);
      pairs.push_back({anum, src, std::move(target)});
    }
  }
  return pairs;
}

void WriteTrainingPairs(const std::vector<TrainingPair>& pairs, const std::string& src_path,
                        const std::string& tgt_path) {
  std::ofstream src(src_path);
  std::ofstream tgt(tgt_path);
  if (!src || !tgt) throw std::runtime_error("cannot write training pairs to " + src_path);
  for (const TrainingPair& p : pairs) {
    src << p.source << '\n';
    tgt << p.target.str() << '\n';
  }
}

// ---- candidate exchange ----

std::vector<Candidate> ReadCandidates(std::istream& in, const lang::GlobalMacroTable* table,
                                      ImportTally* tally) {
  ImportTally local;
  ImportTally& t = tally ? *tally : local;
  std::vector<Candidate> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ++t.lines;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      ++t.malformed;
      continue;
    }
    Candidate c;
    TokenString tokens;
    try {
      c.anum = oeis::ParseANum(line.substr(0, tab));
      tokens = TokenString::Parse(line.substr(tab + 1));
    } catch (const std::exception&) {
      ++t.malformed;
      continue;
    }
    try {
      c.tokens = lang::ExpandAll(tokens, table);
      if (!lang::TryDecode(c.tokens)) {
        ++t.invalid;
        continue;
      }
    } catch (const lang::LangError&) {
      ++t.invalid;
      continue;
    }
    ++t.accepted;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Candidate> ImportCandidates(const std::string& path,
                                        const lang::GlobalMacroTable* table, ImportTally* tally) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open candidates file " + path);
  return ReadCandidates(in, table, tally);
}

void WriteCandidates(std::ostream& out, const std::vector<Candidate>& candidates) {
  for (const Candidate& c : candidates) {
    out << oeis::FormatANum(c.anum) << '\t' << c.tokens.str() << '\n';
  }
}

// ---- n-gram guidance ----

namespace {

int ValueClass(const Integer& v) {
  if (v.sign() < 0) return 4;
  if (v == Integer(0)) return 0;
  if (v == Integer(1)) return 1;
  if (v < Integer(10)) return 2;
  return 3;
}

constexpr uint16_t kNoBucket = 0xFFFF;
constexpr uint64_t kAbsent = 0xFFFF;
constexpr uint64_t kBos = 0xFFFE;

}  // namespace

uint16_t SourceBucket(const std::vector<Integer>& terms) {
  const size_t n = std::min<size_t>(terms.size(), 8);
  const int first = n > 0 ? ValueClass(terms[0]) : 5;
  const int second = n > 1 ? ValueClass(terms[1]) : 5;
  bool increasing = true;
  bool nondecreasing = true;
  for (size_t i = 1; i < n; ++i) {
    increasing &= terms[i - 1] < terms[i];
    nondecreasing &= terms[i - 1] <= terms[i];
  }
  const int mono = increasing ? 0 : nondecreasing ? 1 : 2;
  unsigned bits = 0;
  for (size_t i = 0; i < n; ++i) bits = std::max(bits, terms[i].bit_length());
  const int magnitude = bits <= 3 ? 0 : bits <= 10 ? 1 : bits <= 20 ? 2 : 3;
  return static_cast<uint16_t>(((first * 6 + second) * 3 + mono) * 4 + magnitude);
}

NGramModel::NGramModel(Options options) : options_(options) {
  if (options_.order < 1 || options_.order > 4) {
    throw std::invalid_argument("n-gram order must be between 1 and 4");
  }
  if (!(options_.smoothing > 0)) throw std::invalid_argument("smoothing must be positive");
}

void NGramModel::AddToVocab(UnitCode u) {
  auto it = std::lower_bound(vocab_.begin(), vocab_.end(), u);
  if (it == vocab_.end() || *it != u) vocab_.insert(it, u);
}

uint64_t NGramModel::Key(uint16_t bucket, const std::vector<UnitCode>& context, size_t len) {
  uint64_t key = bucket;
  for (size_t k = 0; k < 3; ++k) {
    uint64_t unit = kAbsent;
    if (k < len) {
      // k-th most recent unit, BOS before the start.
      unit = k < context.size() ? static_cast<uint64_t>(context[context.size() - 1 - k]) : kBos;
    }
    key = (key << 16) | unit;
  }
  return key;
}

void NGramModel::Count(uint64_t key, UnitCode u, uint64_t n) {
  Row& row = rows_[key];
  row.total += n;
  row.next[u] += n;
}

void NGramModel::Add(uint16_t bucket, const std::vector<UnitCode>& target) {
  const size_t ctx = static_cast<size_t>(options_.order - 1);
  std::vector<UnitCode> history;
  for (UnitCode u : target) {
    if (u < 0 || u >= static_cast<UnitCode>(kBos)) throw std::invalid_argument("unit out of range");
    AddToVocab(u);
    for (size_t len = 0; len <= ctx; ++len) Count(Key(kNoBucket, history, len), u);
    if (bucket != kNoBucket) Count(Key(bucket, history, ctx), u);
    history.push_back(u);
  }
  ++targets_;
}

void NGramModel::Merge(const NGramModel& other) {
  if (other.options_.order != options_.order) throw std::invalid_argument("n-gram order mismatch");
  for (UnitCode u : other.vocab_) AddToVocab(u);
  for (const auto& [key, row] : other.rows_) {
    for (const auto& [u, c] : row.next) Count(key, u, c);
  }
  targets_ += other.targets_;
}

void NGramModel::LogProbs(uint16_t bucket, const std::vector<UnitCode>& context,
                          std::vector<double>& out) const {
  const size_t v = vocab_.size();
  out.assign(v, v == 0 ? 0.0 : 1.0 / static_cast<double>(v));
  const double alpha = options_.smoothing;
  auto apply = [&](uint64_t key) {
    auto it = rows_.find(key);
    if (it == rows_.end()) return;
    const double denom = static_cast<double>(it->second.total) + alpha;
    for (double& p : out) p *= alpha / denom;
    for (const auto& [u, c] : it->second.next) {
      auto pos = std::lower_bound(vocab_.begin(), vocab_.end(), u);
      out[static_cast<size_t>(pos - vocab_.begin())] += static_cast<double>(c) / denom;
    }
  };
  const size_t ctx = static_cast<size_t>(options_.order - 1);
  for (size_t len = 0; len <= ctx; ++len) apply(Key(kNoBucket, context, len));
  if (bucket != kNoBucket) apply(Key(bucket, context, ctx));
  for (double& p : out) p = std::log(p);
}

void NGramModel::Write(std::ostream& out) const {
  out << "ngram-model 1\n";
  out << "order " << options_.order << '\n';
  out << "smoothing " << std::setprecision(17) << options_.smoothing << '\n';
  out << "targets " << targets_ << '\n';
  out << "vocab";
  for (UnitCode u : vocab_) out << ' ' << u;
  out << '\n';
  std::vector<uint64_t> keys;
  keys.reserve(rows_.size());
  for (const auto& [k, r] : rows_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (uint64_t k : keys) {
    const Row& r = rows_.at(k);
    out << "row " << std::hex << k << std::dec << ' ' << r.total;
    for (const auto& [u, c] : r.next) out << ' ' << u << ':' << c;
    out << '\n';
  }
}

void NGramModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model " + path);
  Write(out);
}

NGramModel NGramModel::Read(std::istream& in) {
  auto fail = [](const std::string& what) -> NGramModel {
    throw std::runtime_error("bad n-gram model: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "ngram-model 1") return fail("header");
  Options opt;
  size_t targets = 0;
  std::string word;
  if (!(in >> word >> opt.order) || word != "order") return fail("order");
  if (!(in >> word >> opt.smoothing) || word != "smoothing") return fail("smoothing");
  if (!(in >> word >> targets) || word != "targets") return fail("targets");
  NGramModel m(opt);
  m.targets_ = targets;
  std::getline(in, line);
  if (!std::getline(in, line)) return fail("vocab");
  {
    std::istringstream ls(line);
    if (!(ls >> word) || word != "vocab") return fail("vocab");
    UnitCode u;
    while (ls >> u) m.AddToVocab(u);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    uint64_t key = 0;
    uint64_t total = 0;
    if (!(ls >> word) || word != "row" || !(ls >> std::hex >> key >> std::dec >> total)) {
      return fail("row");
    }
    Row& row = m.rows_[key];
    row.total = total;
    std::string item;
    uint64_t sum = 0;
    while (ls >> item) {
      const size_t colon = item.find(':');
      if (colon == std::string::npos) return fail("row item");
      const UnitCode u = std::stoi(item.substr(0, colon));
      const uint64_t c = std::stoull(item.substr(colon + 1));
      row.next[u] = c;
      sum += c;
      if (!std::binary_search(m.vocab_.begin(), m.vocab_.end(), u)) return fail("unit not in vocab");
    }
    if (sum != total) return fail("row total");
  }
  return m;
}

NGramModel NGramModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model " + path);
  return Read(in);
}

bool operator==(const NGramModel& a, const NGramModel& b) {
  return a.options_.order == b.options_.order && a.options_.smoothing == b.options_.smoothing &&
         a.vocab_ == b.vocab_ && a.rows_ == b.rows_ && a.targets_ == b.targets_;
}

namespace {

void AddGrammarVocab(NGramModel& m, const lang::GlobalMacroTable* table, TargetForm form) {
  for (int i = 0; i < lang::kNumOps; ++i) m.AddToVocab(lang::Letter(static_cast<Op>(i)));
  if (form == TargetForm::kGlobalMacros && table) {
    for (size_t i = 0; i < table->size(); ++i) {
      m.AddToVocab(lang::kRefBase + static_cast<UnitCode>(i));
    }
  }
  if (form == TargetForm::kLocalMacros) {
    for (int i = 0; i < lang::kMaxLocalMacros; ++i) m.AddToVocab(lang::kLocalMacroFirst + i);
    m.AddToVocab(lang::kLocalSeparator);
    m.AddToVocab(lang::kEndToken);
  }
}

}  // namespace

NGramModel TrainGuidance(const std::vector<TrainingPair>& pairs, const NGramModel::Options& options,
                         const lang::GlobalMacroTable* table, TargetForm form) {
  NGramModel m(options);
  AddGrammarVocab(m, table, form);
  for (const TrainingPair& p : pairs) {
    std::vector<UnitCode> units = lang::SplitUnits(p.target);
    if (form == TargetForm::kLocalMacros) units.push_back(lang::kEndToken);
    m.Add(SourceBucket(ParseSource(p.source)), units);
  }
  return m;
}

// ---- beam search ----

namespace {

struct UnitShape {
  bool allowed = false;
  int delta = 0;     // change in open argument slots
  int required = 1;  // open slots needed before the unit
};

UnitShape ShapeOf(UnitCode u, const lang::GlobalMacroTable* table, TargetForm form) {
  UnitShape s;
  if (form == TargetForm::kLocalMacros) {
    s.allowed = true;
    return s;
  }
  auto walk = [&](const std::string& tokens) {
    int rel = 0;
    int req = 1;
    for (char c : tokens) {
      if (!lang::IsOpLetter(c)) return;
      req = std::max(req, 1 - rel);
      rel += lang::Arity(lang::OpOfLetter(c)) - 1;
    }
    s.allowed = !tokens.empty();
    s.delta = rel;
    s.required = req;
  };
  if (u < lang::kRefBase) {
    walk(std::string(1, static_cast<char>(u)));
  } else if (form == TargetForm::kGlobalMacros && table) {
    const size_t idx = static_cast<size_t>(u - lang::kRefBase);
    if (idx < table->size()) walk(table->expanded(idx).compact());
  }
  return s;
}

struct Hyp {
  std::vector<UnitCode> units;
  double logp = 0;
  int need = 1;
  bool done = false;
};

struct Expansion {
  double logp;
  int parent;     // index into beam; -1 for a carried finished hypothesis
  int carried;    // index into beam when parent == -1
  UnitCode unit;
};

}  // namespace

std::vector<BeamCandidate> BeamGenerate(const NGramModel& model, uint16_t bucket,
                                        const BeamConfig& config,
                                        const lang::GlobalMacroTable* table, TargetForm form) {
  if (config.width < 1 || config.max_length < 1) throw std::invalid_argument("bad beam config");
  const std::vector<UnitCode>& vocab = model.vocab();
  std::vector<UnitShape> shapes;
  for (UnitCode u : vocab) shapes.push_back(ShapeOf(u, table, form));
  const bool free = form == TargetForm::kLocalMacros;

  std::vector<Hyp> beam(1);
  std::vector<double> lp;
  std::vector<Expansion> pool;
  for (int step = 0; step < config.max_length; ++step) {
    pool.clear();
    bool any_active = false;
    for (size_t i = 0; i < beam.size(); ++i) {
      const Hyp& h = beam[i];
      if (h.done) {
        pool.push_back({h.logp, -1, static_cast<int>(i), 0});
        continue;
      }
      any_active = true;
      model.LogProbs(bucket, h.units, lp);
      double mass = 0;
      for (size_t k = 0; k < vocab.size(); ++k) {
        if (shapes[k].allowed && (free || h.need >= shapes[k].required)) mass += std::exp(lp[k]);
      }
      if (mass <= 0) continue;
      const double norm = std::log(mass);
      for (size_t k = 0; k < vocab.size(); ++k) {
        if (!shapes[k].allowed || (!free && h.need < shapes[k].required)) continue;
        pool.push_back({h.logp + lp[k] - norm, static_cast<int>(i), 0, vocab[k]});
      }
    }
    if (!any_active) break;
    auto units_of = [&](const Expansion& e, size_t k, UnitCode& out) -> bool {
      const Hyp& base = beam[e.parent >= 0 ? e.parent : e.carried];
      if (k < base.units.size()) {
        out = base.units[k];
        return true;
      }
      if (e.parent >= 0 && k == base.units.size()) {
        out = e.unit;
        return true;
      }
      return false;
    };
    auto better = [&](const Expansion& a, const Expansion& b) {
      if (a.logp != b.logp) return a.logp > b.logp;
      for (size_t k = 0;; ++k) {
        UnitCode ua, ub;
        const bool ha = units_of(a, k, ua);
        const bool hb = units_of(b, k, ub);
        if (!ha || !hb) return !ha && hb;
        if (ua != ub) return ua < ub;
      }
    };
    const size_t keep = std::min(pool.size(), static_cast<size_t>(config.width));
    std::partial_sort(pool.begin(), pool.begin() + static_cast<long>(keep), pool.end(), better);
    std::vector<Hyp> next;
    next.reserve(keep);
    for (size_t j = 0; j < keep; ++j) {
      const Expansion& e = pool[j];
      if (e.parent < 0) {
        next.push_back(beam[e.carried]);
        continue;
      }
      Hyp h = beam[e.parent];
      h.logp = e.logp;
      if (free) {
        if (e.unit == lang::kEndToken) {
          h.done = true;
        } else {
          h.units.push_back(e.unit);
        }
      } else {
        const auto k = std::lower_bound(vocab.begin(), vocab.end(), e.unit) - vocab.begin();
        h.units.push_back(e.unit);
        h.need += shapes[static_cast<size_t>(k)].delta;
        h.done = h.need == 0;
      }
      next.push_back(std::move(h));
    }
    beam = std::move(next);
  }
  std::vector<BeamCandidate> out;
  for (const Hyp& h : beam) {
    if (!h.done || h.units.empty()) continue;
    out.push_back({lang::JoinUnits(h.units), h.logp});
  }
  // The beam is already ranked; keep that order.
  return out;
}

// ---- global macro mining ----

std::vector<MinedMacro> MineGlobalMacros(const std::vector<TokenString>& programs,
                                         const lang::GlobalMacroTable& table,
                                         const MiningConfig& config) {
  struct Tally {
    size_t count = 0;
    size_t program = SIZE_MAX;
    size_t end = 0;
  };
  std::unordered_map<std::string, Tally> tallies;
  for (size_t p = 0; p < programs.size(); ++p) {
    const std::string& s = programs[p].compact();
    for (size_t len = config.min_length; len <= config.max_length && len <= s.size(); ++len) {
      for (size_t i = 0; i + len <= s.size(); ++i) {
        Tally& t = tallies[s.substr(i, len)];
        if (t.program == p && i < t.end) continue;
        ++t.count;
        t.program = p;
        t.end = i + len;
      }
    }
  }
  std::set<std::string> present;
  for (size_t i = 0; i < table.size(); ++i) present.insert(table.expanded(i).compact());
  std::vector<MinedMacro> ranked;
  for (const auto& [s, t] : tallies) {
    if (t.count < config.min_count || present.count(s)) continue;
    ranked.push_back({TokenString(s), t.count});
  }
  std::sort(ranked.begin(), ranked.end(), [](const MinedMacro& a, const MinedMacro& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.tokens.size() != b.tokens.size()) return a.tokens.size() > b.tokens.size();
    return a.tokens < b.tokens;
  });
  if (ranked.size() > config.budget) ranked.resize(config.budget);
  return ranked;
}

size_t AppendMacros(lang::GlobalMacroTable& table, const std::vector<MinedMacro>& mined) {
  size_t added = 0;
  for (const MinedMacro& m : mined) {
    table.Add(lang::AbstractReplace(m.tokens, table));
    ++added;
  }
  return added;
}

std::vector<TokenString> StoredPrograms(const SolutionStore& store) {
  std::set<TokenString> all;
  for (const auto& [anum, rec] : store.records()) {
    all.insert(rec.smallest.tokens);
    all.insert(rec.fastest.tokens);
  }
  return {all.begin(), all.end()};
}

}  // namespace seqsynth::synth
