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


#include "seqsynth/loop.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "seqsynth/parallel.hpp"

namespace seqsynth::loop {

namespace fs = std::filesystem;
using lang::TokenString;
using synth::Candidate;
using synth::TargetForm;

namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string& v) {
  std::istringstream in(v);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof()) throw std::invalid_argument("bad number '" + v + "'");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.find('-') != std::string::npos) throw std::invalid_argument("negative '" + v + "'");
  }
  return out;
}

template <typename T>
std::string Show(T v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <typename T>
ConfigKey NumberKey(std::string name, std::string help, T LoopConfig::*field) {
  return {std::move(name), std::move(help),
          [field](LoopConfig& c, const std::string& v) { c.*field = ParseNumber<T>(v); },
          [field](const LoopConfig& c) { return Show(c.*field); }};
}

ConfigKey StringKey(std::string name, std::string help, std::string LoopConfig::*field) {
  return {std::move(name), std::move(help),
          [field](LoopConfig& c, const std::string& v) { c.*field = v; },
          [field](const LoopConfig& c) { return c.*field; }};
}

std::vector<std::string> SplitComma(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      cur = Trim(cur);
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

}  // namespace

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = {
      StringKey("corpus", "stripped corpus file", &LoopConfig::corpus),
      NumberKey("max_terms", "terms kept per sequence (0: all)", &LoopConfig::max_terms),
      StringKey("out_dir", "directory receiving one subdirectory per iteration", &LoopConfig::out_dir),
      NumberKey("iterations", "number of iterations", &LoopConfig::iterations),
      NumberKey("seed", "random seed", &LoopConfig::seed),
      NumberKey("jobs", "worker threads (0: all cores)", &LoopConfig::jobs),
      StringKey("check_mode", "fast, slow or hybrid", &LoopConfig::check_mode),
      NumberKey("slow_from", "first iteration checked in slow mode (-1: never)", &LoopConfig::slow_from),
      NumberKey("fast_t_call", "fast limit: time per call", &LoopConfig::fast_t_call),
      NumberKey("fast_n_compr", "fast limit: compr cache size", &LoopConfig::fast_n_compr),
      NumberKey("slow_t_call", "slow limit: time per call", &LoopConfig::slow_t_call),
      NumberKey("slow_n_compr", "slow limit: compr cache size", &LoopConfig::slow_n_compr),
      NumberKey("hybrid_min_depth", "trie depth needed for a hybrid re-run", &LoopConfig::hybrid_min_depth),
      NumberKey("random_count", "random programs when the store is empty", &LoopConfig::random_count),
      NumberKey("random_max_size", "size bound of random programs", &LoopConfig::random_max_size),
      NumberKey("random_per_iteration", "extra random programs every iteration", &LoopConfig::random_per_iteration),
      StringKey("models", "guidance portfolio: full, half, quarter, continuous", &LoopConfig::models),
      StringKey("target_form", "program form for training: plain, global, local", &LoopConfig::target_form),
      NumberKey("macro_budget", "global macros mined per iteration", &LoopConfig::macro_budget),
      NumberKey("macro_min_length", "shortest mined macro", &LoopConfig::macro_min_length),
      NumberKey("macro_max_length", "longest mined macro", &LoopConfig::macro_max_length),
      NumberKey("macro_min_count", "occurrences needed to mine a macro", &LoopConfig::macro_min_count),
      NumberKey("ngram_order", "n-gram order (1 to 4)", &LoopConfig::ngram_order),
      NumberKey("smoothing", "back-off mass of the n-gram model", &LoopConfig::smoothing),
      NumberKey("beam_width", "beam width", &LoopConfig::beam_width),
      NumberKey("max_length", "longest decoded output, in units", &LoopConfig::max_length),
      NumberKey("per_sequence_cap", "candidates kept per sequence", &LoopConfig::per_sequence_cap),
      NumberKey("source_max_tokens", "source tokens per training pair", &LoopConfig::source_max_tokens),
      StringKey("external_command", "external guidance command ({dir}: iteration directory)",
                &LoopConfig::external_command),
  };
  return keys;
}

void SetConfigValue(LoopConfig& config, const std::string& key, const std::string& value) {
  for (const ConfigKey& k : ConfigKeys()) {
    if (k.name == key) {
      try {
        k.set(config, value);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("config key " + key + ": " + e.what());
      }
      return;
    }
  }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

void ApplyConfig(LoopConfig& config, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      SetConfigValue(config, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void ApplyConfigFile(LoopConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  ApplyConfig(config, in);
}

void WriteConfig(std::ostream& out, const LoopConfig& config) {
  for (const ConfigKey& k : ConfigKeys()) {
    if (k.name == "out_dir" || k.name == "jobs") continue;
    out << k.name << " = " << k.get(config) << '\n';
  }
}

std::string ConfigHelp() {
  const LoopConfig defaults;
  std::ostringstream os;
  os << "Config keys (key = value; '#' starts a comment):\n";
  for (const ConfigKey& k : ConfigKeys()) {
    std::string def = k.get(defaults);
    if (def.empty()) def = "\"\"";
    os << "  " << std::left << std::setw(22) << k.name << std::setw(10) << def << ' ' << k.help
       << '\n';
  }
  return os.str();
}

checker::CheckConfig LoopConfig::CheckFor(int iteration) const {
  checker::CheckConfig c;
  c.mode = *checker::ParseMode(check_mode);
  if (slow_from >= 0 && iteration >= slow_from) c.mode = checker::CheckMode::kSlow;
  c.fast = eval::EvalLimits{fast_t_call, fast_n_compr, eval::EvalLimits::DefaultMaxMagnitude()};
  c.slow = eval::EvalLimits{slow_t_call, slow_n_compr, eval::EvalLimits::DefaultMaxMagnitude()};
  c.hybrid_min_depth = hybrid_min_depth;
  c.jobs = jobs > 0 ? jobs : DefaultJobs();
  return c;
}

TargetForm LoopConfig::form() const {
  if (target_form == "global") return TargetForm::kGlobalMacros;
  if (target_form == "local") return TargetForm::kLocalMacros;
  return TargetForm::kPlain;
}

std::vector<std::string> LoopConfig::model_names() const { return SplitComma(models); }

void LoopConfig::Validate() const {
  auto bad = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("config key " + key + ": " + why);
  };
  if (iterations < 0) bad("iterations", "must be nonnegative");
  if (!checker::ParseMode(check_mode)) bad("check_mode", "expected fast, slow or hybrid");
  if (fast_t_call < 1 || slow_t_call < 1) bad("fast_t_call", "time limits must be positive");
  if (fast_n_compr < 0 || slow_n_compr < 0) bad("fast_n_compr", "must be nonnegative");
  if (random_max_size < 1) bad("random_max_size", "must be positive");
  if (target_form != "plain" && target_form != "global" && target_form != "local") {
    bad("target_form", "expected plain, global or local");
  }
  std::set<std::string> seen;
  for (const std::string& m : model_names()) {
    if (m != "full" && m != "half" && m != "quarter" && m != "continuous") {
      bad("models", "unknown model '" + m + "'");
    }
    if (!seen.insert(m).second) bad("models", "duplicate model '" + m + "'");
  }
  if (macro_min_length < 1 || macro_min_length > macro_max_length) {
    bad("macro_min_length", "need 1 <= min <= max");
  }
  if (ngram_order < 1 || ngram_order > 4) bad("ngram_order", "must be between 1 and 4");
  if (!(smoothing > 0)) bad("smoothing", "must be positive");
  if (beam_width < 1) bad("beam_width", "must be positive");
  if (max_length < 1) bad("max_length", "must be positive");
  if (per_sequence_cap < 1) bad("per_sequence_cap", "must be positive");
}

void IterationReport::Write(std::ostream& out) const {
  out << "iteration: " << iteration << '\n';
  out << "mode: " << mode << '\n';
  out << "training_pairs: " << training_pairs << '\n';
  out << "macros: " << macros << '\n';
  out << "models_used: " << models_used << '\n';
  out << "models_skipped: " << models_skipped << '\n';
  out << "generated: " << generated << '\n';
  out << "invalid: " << invalid << '\n';
  out << "external_imported: " << external_imported << '\n';
  out << "unique_candidates: " << unique << '\n';
  out << "promoted: " << check.promoted << '\n';
  out << "solving_candidates: " << check.solving << '\n';
  out << "new_solutions: " << new_solutions << '\n';
  out << "own_solutions: " << own_solutions << '\n';
  out << "total_solutions: " << total_solutions << '\n';
  out << "improved_smallest: " << check.improved_smallest << '\n';
  out << "improved_fastest: " << check.improved_fastest << '\n';
  for (int s = 1; s < eval::kNumStatuses; ++s) {
    out << "abort_" << eval::StatusName(static_cast<eval::Status>(s)) << ": "
        << check.aborts[static_cast<size_t>(s)] << '\n';
  }
}

LoopContext LoopContext::FromCorpus(oeis::Corpus corpus) {
  LoopContext ctx;
  ctx.trie = oeis::SequenceTrie::Build(corpus);
  ctx.corpus = std::move(corpus);
  return ctx;
}

std::string IterationDirName(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "iter_%03d", iteration);
  return buf;
}

namespace {

constexpr uint64_t kTagRandom = 1;
constexpr uint64_t kTagSubset = 2;
constexpr uint64_t kTagExtraRandom = 3;

std::vector<synth::TrainingPair> Subset(const std::vector<synth::TrainingPair>& pairs,
                                        size_t divisor, uint64_t seed) {
  std::vector<size_t> idx(pairs.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  synth::Rng rng(seed);
  for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.Below(i)]);
  idx.resize((pairs.size() + divisor - 1) / divisor);
  std::sort(idx.begin(), idx.end());
  std::vector<synth::TrainingPair> out;
  for (size_t i : idx) out.push_back(pairs[i]);
  return out;
}

void WriteInferSource(const LoopContext& ctx, const LoopConfig& config, const std::string& path) {
  std::ofstream out(path);
  for (const oeis::SequenceEntry& e : ctx.corpus) {
    out << oeis::FormatANum(e.anum) << '\t'
        << synth::RenderSource(e.terms, config.source_max_tokens) << '\n';
  }
}

// Beam candidates of one model for every bucket present in the corpus.
void GenerateFromModel(const synth::NGramModel& model, const LoopContext& ctx,
                       const IterationState& state, std::vector<Candidate>& out,
                       IterationReport& report) {
  const LoopConfig& cfg = state.config;
  std::map<uint16_t, oeis::ANum> buckets;  // bucket -> first sequence in corpus order
  for (const oeis::SequenceEntry& e : ctx.corpus) buckets.try_emplace(synth::SourceBucket(e.terms), e.anum);
  std::vector<std::pair<uint16_t, oeis::ANum>> todo(buckets.begin(), buckets.end());
  std::vector<std::vector<synth::BeamCandidate>> beams(todo.size());
  synth::BeamConfig bc{cfg.beam_width, cfg.max_length, cfg.per_sequence_cap};
  const TargetForm form = cfg.form();
  ParallelFor(todo.size(), cfg.jobs > 0 ? cfg.jobs : DefaultJobs(), [&](size_t i) {
    beams[i] = synth::BeamGenerate(model, todo[i].first, bc, &state.table, form);
  });
  for (size_t i = 0; i < todo.size(); ++i) {
    size_t kept = 0;
    for (const synth::BeamCandidate& b : beams[i]) {
      if (kept == static_cast<size_t>(cfg.per_sequence_cap)) break;
      ++kept;
      ++report.generated;
      try {
        TokenString plain = lang::ExpandAll(b.tokens, &state.table);
        if (!lang::TryDecode(plain)) {
          ++report.invalid;
          continue;
        }
        out.push_back({todo[i].second, std::move(plain)});
      } catch (const lang::LangError&) {
        ++report.invalid;
      }
    }
  }
}

}  // namespace

IterationReport RunIteration(IterationState& state, const LoopContext& ctx, const std::string& dir) {
  const LoopConfig& cfg = state.config;
  cfg.Validate();
  const int it = state.iteration;
  fs::create_directories(dir);
  const std::string d = dir + "/";

  IterationReport report;
  report.iteration = it;
  const checker::CheckConfig check = cfg.CheckFor(it);
  report.mode = std::string(checker::ModeName(check.mode));

  // Entering slow mode: stored speeds are re-measured under the slow limits.
  if (cfg.slow_from >= 0 && it == cfg.slow_from && !state.store.empty()) {
    std::map<oeis::ANum, const oeis::SequenceEntry*> by_anum;
    for (const oeis::SequenceEntry& e : ctx.corpus) by_anum[e.anum] = &e;
    state.store.Remeasure(
        [&](oeis::ANum anum, const Program& p) -> std::optional<int64_t> {
          auto e = by_anum.find(anum);
          auto expr = lang::TryDecode(p.tokens);
          if (e == by_anum.end() || !expr) return std::nullopt;
          return checker::MeasureSpeed(*expr, e->second->terms, check.slow);
        },
        it);
  }

  // Learn.
  const TargetForm form = cfg.form();
  std::vector<std::pair<std::string, synth::NGramModel>> models;
  const bool learning = !state.store.empty();
  if (learning) {
    if (form == TargetForm::kGlobalMacros) {
      synth::MiningConfig mc{cfg.macro_budget, cfg.macro_min_length, cfg.macro_max_length,
                             cfg.macro_min_count};
      synth::AppendMacros(state.table,
                          synth::MineGlobalMacros(synth::StoredPrograms(state.store), state.table, mc));
    }
    std::vector<synth::TrainingPair> pairs = synth::MakeTrainingPairs(
        state.store, ctx.corpus, form, &state.table, cfg.source_max_tokens);
    report.training_pairs = pairs.size();
    synth::WriteTrainingPairs(pairs, d + "train.src", d + "train.tgt");
    WriteInferSource(ctx, cfg, d + "infer.src");
    synth::NGramModel::Options mo{cfg.ngram_order, cfg.smoothing};
    for (const std::string& name : cfg.model_names()) {
      synth::NGramModel m;
      if (name == "full") {
        m = synth::TrainGuidance(pairs, mo, &state.table, form);
      } else if (name == "half" || name == "quarter") {
        const size_t div = name == "half" ? 2 : 4;
        m = synth::TrainGuidance(Subset(pairs, div, synth::DeriveSeed(cfg.seed, kTagSubset, it * 8 + div)),
                                 mo, &state.table, form);
      } else {
        synth::NGramModel fresh = synth::TrainGuidance(pairs, mo, &state.table, form);
        if (!state.continuous) state.continuous = synth::NGramModel(mo);
        state.continuous->Merge(fresh);
        m = *state.continuous;
      }
      m.Save(d + "model_" + name + ".txt");
      models.emplace_back(name, std::move(m));
    }
  }
  state.table.Save(d + "macros.txt");
  report.macros = state.table.size();

  // Search.
  std::vector<Candidate> raw;
  if (!learning) {
    synth::RandomConfig rc;
    rc.max_size = cfg.random_max_size;
    for (TokenString& t : synth::RandomPrograms(cfg.random_count, rc,
                                                synth::DeriveSeed(cfg.seed, kTagRandom, it))) {
      raw.push_back({0, std::move(t)});
    }
    report.generated += raw.size();
  }
  for (const auto& [name, m] : models) {
    GenerateFromModel(m, ctx, state, raw, report);
    ++report.models_used;
  }
  if (learning && cfg.random_per_iteration > 0) {
    synth::RandomConfig rc;
    rc.max_size = cfg.random_max_size;
    for (TokenString& t : synth::RandomPrograms(cfg.random_per_iteration, rc,
                                                synth::DeriveSeed(cfg.seed, kTagExtraRandom, it))) {
      raw.push_back({0, std::move(t)});
      ++report.generated;
    }
  }
  if (learning && !cfg.external_command.empty()) {
    std::string cmd = cfg.external_command;
    for (size_t p = cmd.find("{dir}"); p != std::string::npos; p = cmd.find("{dir}", p + dir.size())) {
      cmd.replace(p, 5, dir);
    }
    const std::string ext = d + "external_candidates.txt";
    std::error_code ec;
    fs::remove(ext, ec);
    std::cout.flush();
    const int status = std::system(cmd.c_str());
    if (status != 0 || !fs::exists(ext)) {
      std::cerr << "warning: external model failed (status " << status << "); skipped\n";
      ++report.models_skipped;
    } else {
      synth::ImportTally tally;
      std::vector<Candidate> imported = synth::ImportCandidates(ext, &state.table, &tally);
      report.generated += tally.lines;
      report.invalid += tally.malformed + tally.invalid;
      report.external_imported = imported.size();
      for (Candidate& c : imported) raw.push_back(std::move(c));
      ++report.models_used;
    }
  }

  // Deduplicate by expanded token string; the first tag wins.
  std::vector<Candidate> pool;
  {
    std::unordered_set<TokenString, lang::TokenStringHash> seen;
    for (Candidate& c : raw) {
      if (seen.insert(c.tokens).second) pool.push_back(std::move(c));
    }
    std::sort(pool.begin(), pool.end(),
              [](const Candidate& a, const Candidate& b) { return a.tokens < b.tokens; });
  }
  report.unique = pool.size();
  {
    std::ofstream out(d + "candidates.txt");
    synth::WriteCandidates(out, pool);
  }

  // Check.
  std::vector<TokenString> tokens;
  tokens.reserve(pool.size());
  for (const Candidate& c : pool) tokens.push_back(c.tokens);
  report.check = checker::CheckPool(tokens, ctx.trie, check, state.store, it);
  report.new_solutions = report.check.new_solutions;
  report.own_solutions = report.check.solved.size();
  report.total_solutions = state.store.size();

  // Persist.
  {
    std::ofstream j(d + "journal.tsv");
    for (const JournalEvent& e : state.store.TakeEvents()) j << FormatJournalEvent(e) << '\n';
  }
  state.store.Save(d + "solutions.tsv");
  {
    std::ofstream out(d + "report.txt");
    report.Write(out);
  }
  state.iteration = it + 1;
  if (state.continuous) state.continuous->Save(d + "model_continuous.txt");
  {
    std::ofstream out(d + "state.txt");
    out << "next_iteration = " << state.iteration << '\n';
    WriteConfig(out, cfg);
  }
  return report;
}

IterationState IterationState::Load(const std::string& dir) {
  const std::string d = dir + "/";
  std::ifstream in(d + "state.txt");
  if (!in) throw std::runtime_error("cannot open " + d + "state.txt");
  IterationState s;
  std::stringstream rest;
  std::string line;
  bool have_iteration = false;
  while (std::getline(in, line)) {
    const std::string t = Trim(line);
    if (t.rfind("next_iteration", 0) == 0) {
      const size_t eq = t.find('=');
      if (eq == std::string::npos) throw std::runtime_error("bad state.txt");
      s.iteration = ParseNumber<int>(Trim(t.substr(eq + 1)));
      have_iteration = true;
    } else {
      rest << line << '\n';
    }
  }
  if (!have_iteration) throw std::runtime_error("state.txt lacks next_iteration");
  ApplyConfig(s.config, rest);
  s.store = SolutionStore::Load(d + "solutions.tsv");
  s.table = lang::GlobalMacroTable::Load(d + "macros.txt");
  if (fs::exists(d + "model_continuous.txt")) {
    s.continuous = synth::NGramModel::Load(d + "model_continuous.txt");
  }
  return s;
}

std::vector<IterationReport> RunLoop(const LoopConfig& config,
                                     const std::optional<std::string>& resume, std::ostream* log) {
  config.Validate();
  IterationState state;
  if (resume) {
    state = IterationState::Load(*resume);
    state.config.out_dir = config.out_dir;
    state.config.iterations = config.iterations;
    state.config.jobs = config.jobs;
  } else {
    state.config = config;
  }
  LoopContext ctx = LoopContext::FromCorpus(oeis::LoadStripped(state.config.corpus, state.config.max_terms));
  fs::create_directories(config.out_dir);
  const std::string journal_path = config.out_dir + "/journal.tsv";
  if (!resume) std::ofstream(journal_path, std::ios::trunc);
  std::vector<IterationReport> reports;
  while (state.iteration < state.config.iterations) {
    const std::string dir = config.out_dir + "/" + IterationDirName(state.iteration);
    reports.push_back(RunIteration(state, ctx, dir));
    {
      std::ifstream part(dir + "/journal.tsv");
      std::ofstream all(journal_path, std::ios::app);
      all << part.rdbuf();
    }
    if (log) {
      const IterationReport& r = reports.back();
      *log << "iteration " << r.iteration << ": mode " << r.mode << ", unique " << r.unique
           << ", new " << r.new_solutions << ", total " << r.total_solutions << '\n';
    }
  }
  return reports;
}

}  // namespace seqsynth::loop
