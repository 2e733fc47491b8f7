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


#include "seqsynth/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "seqsynth/analysis.hpp"
#include "seqsynth/checker.hpp"
#include "seqsynth/eval.hpp"
#include "seqsynth/lang.hpp"
#include "seqsynth/loop.hpp"
#include "seqsynth/oeis.hpp"
#include "seqsynth/parallel.hpp"
#include "seqsynth/python.hpp"
#include "seqsynth/store.hpp"
#include "seqsynth/symbolic.hpp"
#include "seqsynth/synth.hpp"

namespace seqsynth::cli {

namespace fs = std::filesystem;
using lang::TokenString;

namespace {

// Thrown for bad input data (as opposed to bad flags or internal faults).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string OneLine(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::ofstream OpenOut(const std::string& path) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

eval::EvalLimits LimitsByName(const std::string& name) {
  return name == "slow" ? eval::EvalLimits::Slow() : eval::EvalLimits::Fast();
}

int Jobs(int jobs) { return jobs > 0 ? jobs : DefaultJobs(); }

std::optional<lang::GlobalMacroTable> MaybeTable(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return lang::GlobalMacroTable::Load(path);
}

// A program given as tokens (macros allowed) or in symbolic form.
lang::Expr ProgramArg(const std::string& tokens, const std::string& symbolic,
                      const lang::GlobalMacroTable* table) {
  if (!symbolic.empty()) return lang::ParseSymbolic(symbolic);
  return lang::Decode(lang::ExpandAll(TokenString::Parse(tokens), table));
}

std::vector<synth::TrainingPair> ReadPairs(const std::string& src_path, const std::string& tgt_path) {
  std::ifstream src(src_path);
  std::ifstream tgt(tgt_path);
  if (!src) throw DataError("cannot open " + src_path);
  if (!tgt) throw DataError("cannot open " + tgt_path);
  std::vector<synth::TrainingPair> pairs;
  std::string s, t;
  while (std::getline(src, s)) {
    if (!std::getline(tgt, t)) throw DataError("training files differ in length");
    pairs.push_back({0, s, TokenString::Parse(t)});
  }
  if (std::getline(tgt, t)) throw DataError("training files differ in length");
  return pairs;
}

// The newest iteration directory of a run that holds a state file.
std::string LatestStateDir(const std::string& run_dir) {
  if (fs::exists(fs::path(run_dir) / "state.txt")) return run_dir;
  std::string best;
  long best_index = -1;
  for (const auto& e : fs::directory_iterator(run_dir)) {
    const std::string n = e.path().filename().string();
    if (n.rfind("iter_", 0) != 0 || !fs::exists(e.path() / "state.txt")) continue;
    const long index = std::strtol(n.c_str() + 5, nullptr, 10);
    if (index > best_index) {
      best_index = index;
      best = e.path().string();
    }
  }
  if (best.empty()) throw DataError("no iteration state under " + run_dir);
  return best;
}

synth::TargetForm FormByName(const std::string& s) {
  if (s == "global") return synth::TargetForm::kGlobalMacros;
  if (s == "local") return synth::TargetForm::kLocalMacros;
  return synth::TargetForm::kPlain;
}

void WriteCheckReport(std::ostream& out, const checker::CheckReport& r, size_t total) {
  out << "checked: " << r.checked << '\n';
  out << "unique_candidates: " << r.unique << '\n';
  out << "invalid: " << r.invalid << '\n';
  out << "promoted: " << r.promoted << '\n';
  out << "solving_candidates: " << r.solving << '\n';
  out << "new_solutions: " << r.new_solutions << '\n';
  out << "improved_smallest: " << r.improved_smallest << '\n';
  out << "improved_fastest: " << r.improved_fastest << '\n';
  out << "total_solutions: " << total << '\n';
  for (int s = 1; s < eval::kNumStatuses; ++s) {
    out << "abort_" << eval::StatusName(static_cast<eval::Status>(s)) << ": "
        << r.aborts[static_cast<size_t>(s)] << '\n';
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Program synthesis for integer sequences", "seqsynth"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Loop configuration keys (key = value in --config files, or --set key=value):\n" +
             loop::ConfigHelp());
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  // ingest
  std::string in_path, out_path, corpus_path, solutions_path, macros_path, dir_path;
  size_t max_terms = 0;
  auto* ingest = app.add_subcommand("ingest", "Normalize a stripped corpus and report its trie");
  ingest->add_option("--stripped", in_path, "OEIS stripped file")->required();
  ingest->add_option("--out", out_path, "Write the normalized corpus here");
  ingest->add_option("--max-terms", max_terms, "Keep at most this many terms per sequence");

  // eval
  std::string program, symbolic, limits_name = "slow";
  int64_t terms = 10;
  auto* evalc = app.add_subcommand("eval", "Print the first terms of a program");
  auto* prog_opt = evalc->add_option("--program", program, "Token string");
  evalc->add_option("--symbolic", symbolic, "Program in symbolic form")->excludes(prog_opt);
  evalc->add_option("--terms", terms, "Number of terms")->check(CLI::NonNegativeNumber);
  evalc->add_option("--limits", limits_name, "fast or slow")->check(CLI::IsMember({"fast", "slow"}));
  evalc->add_option("--macros", macros_path, "Global macro table");

  // check
  std::string pool_path, mode_name = "hybrid";
  int iteration = 0;
  auto* check = app.add_subcommand("check", "Check a candidate pool against a corpus");
  check->add_option("--pool", pool_path, "Candidates file (ANUM<TAB>TOKENS)")->required();
  check->add_option("--corpus", corpus_path, "Stripped corpus")->required();
  check->add_option("--mode", mode_name, "fast, slow or hybrid")
      ->check(CLI::IsMember({"fast", "slow", "hybrid"}));
  check->add_option("--out", dir_path, "Output directory")->required();
  check->add_option("--solutions", solutions_path, "Existing solutions to extend");
  check->add_option("--macros", macros_path, "Global macro table");
  check->add_option("--iteration", iteration, "Iteration tag for new events");
  check->add_option("--max-terms", max_terms, "Terms per sequence");

  // random-gen
  size_t count = 1000;
  int max_size = 20;
  uint64_t seed = 1;
  auto* rgen = app.add_subcommand("random-gen", "Write random programs as candidates");
  rgen->add_option("--count", count, "Number of programs");
  rgen->add_option("--max-size", max_size, "Largest program size")->check(CLI::PositiveNumber);
  rgen->add_option("--seed", seed, "Random seed");
  rgen->add_option("--out", out_path, "Candidates file")->required();

  // train
  std::string src_path, tgt_path, model_path, form_name = "plain";
  synth::NGramModel::Options model_options;
  auto* train = app.add_subcommand("train", "Train the n-gram guidance model on exchange files");
  train->add_option("--src", src_path, "train.src")->required();
  train->add_option("--tgt", tgt_path, "train.tgt")->required();
  train->add_option("--out", model_path, "Model file")->required();
  train->add_option("--order", model_options.order, "N-gram order")->check(CLI::Range(1, 4));
  train->add_option("--smoothing", model_options.smoothing, "Back-off mass")
      ->check(CLI::PositiveNumber);
  train->add_option("--form", form_name, "plain, global or local")
      ->check(CLI::IsMember({"plain", "global", "local"}));
  train->add_option("--macros", macros_path, "Global macro table");

  // infer
  synth::BeamConfig beam;
  auto* infer = app.add_subcommand("infer", "Beam-search candidates for a corpus");
  infer->add_option("--model", model_path, "Model file")->required();
  infer->add_option("--corpus", corpus_path, "Stripped corpus")->required();
  infer->add_option("--out", out_path, "Candidates file")->required();
  infer->add_option("--width", beam.width, "Beam width")->check(CLI::PositiveNumber);
  infer->add_option("--max-length", beam.max_length, "Longest output")->check(CLI::PositiveNumber);
  infer->add_option("--form", form_name, "plain, global or local")
      ->check(CLI::IsMember({"plain", "global", "local"}));
  infer->add_option("--macros", macros_path, "Global macro table");

  // loop
  std::string config_path, resume_dir;
  std::vector<std::string> sets;
  int iterations = -1;
  auto* loopc = app.add_subcommand("loop", "Run the synthesis loop");
  loopc->add_option("--config", config_path, "Config file");
  loopc->add_option("--set", sets, "key=value override (repeatable)");
  loopc->add_option("--corpus", corpus_path, "Stripped corpus");
  loopc->add_option("--out", dir_path, "Run directory");
  loopc->add_option("--iterations", iterations, "Total iterations")->check(CLI::NonNegativeNumber);
  loopc->add_option("--resume", resume_dir, "Continue the run in this directory");

  // macros
  synth::MiningConfig mining;
  auto* macros = app.add_subcommand("macros", "Mine global macros from stored solutions");
  macros->add_option("--solutions", solutions_path, "solutions.tsv")->required();
  macros->add_option("--table", macros_path, "Existing table to extend");
  macros->add_option("--out", out_path, "Table file")->required();
  macros->add_option("--budget", mining.budget, "New macros at most");
  macros->add_option("--min-length", mining.min_length, "Shortest macro");
  macros->add_option("--max-length", mining.max_length, "Longest macro");
  macros->add_option("--min-count", mining.min_count, "Fewest programs");

  // stats
  std::vector<std::string> patterns;
  bool subtree = false;
  int horizon = 100;
  auto* stats = app.add_subcommand("stats", "Analysis CSVs and plot scripts for a run");
  stats->add_option("--run", dir_path, "Run directory")->required();
  stats->add_option("--out", out_path, "Output directory")->required();
  stats->add_option("--pattern", patterns, "NAME=TOKENS for the census (repeatable)");
  stats->add_flag("--subtree", subtree, "Match census patterns as subtrees");
  stats->add_option("--horizon", horizon, "Largest offset for the reduction curve");

  // transpile
  std::string name = "f";
  auto* transpile = app.add_subcommand("transpile", "Write programs as Python");
  auto* tp_prog = transpile->add_option("--program", program, "Token string");
  auto* tp_sym = transpile->add_option("--symbolic", symbolic, "Symbolic form")->excludes(tp_prog);
  transpile->add_option("--solutions", solutions_path, "Write every smallest solution")
      ->excludes(tp_prog)
      ->excludes(tp_sym);
  transpile->add_option("--macros", macros_path, "Global macro table");
  transpile->add_option("--name", name, "Entry function name");
  transpile->add_option("--out", out_path, "Python file, or directory with --solutions")->required();

  // bcheck
  std::string bfile_dir;
  size_t max_extra = 100;
  auto* bcheck = app.add_subcommand("bcheck", "Check stored solutions on b-file extensions");
  bcheck->add_option("--solutions", solutions_path, "solutions.tsv")->required();
  bcheck->add_option("--corpus", corpus_path, "Stripped corpus")->required();
  bcheck->add_option("--bfiles", bfile_dir, "Directory of bNNNNNN.txt")->required();
  bcheck->add_option("--max-extra", max_extra, "Extension terms per sequence");
  bcheck->add_option("--out", out_path, "Per-program verdicts (TSV)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << OneLine(e.what()) << '\n';
    return kUsage;
  }

  try {
    const auto table = MaybeTable(macros_path);
    const lang::GlobalMacroTable* tp = table ? &*table : nullptr;

    if (*ingest) {
      oeis::Corpus corpus = oeis::LoadStripped(in_path, max_terms);
      oeis::SequenceTrie trie = oeis::SequenceTrie::Build(corpus);
      size_t total = 0;
      for (const auto& e : corpus) total += e.terms.size();
      out << "sequences: " << corpus.size() << '\n'
          << "terms: " << total << '\n'
          << "trie_nodes: " << trie.node_count() << '\n'
          << "trie_marks: " << trie.mark_count() << '\n';
      if (!out_path.empty()) {
        std::ofstream f = OpenOut(out_path);
        oeis::WriteStripped(f, corpus);
      }
    } else if (*evalc) {
      if (program.empty() && symbolic.empty()) throw CLI::RequiredError("--program or --symbolic");
      lang::Expr e = ProgramArg(program, symbolic, tp);
      std::vector<Integer> values;
      eval::RunResult r = eval::FirstTerms(e, LimitsByName(limits_name), terms, values);
      for (size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << values[i];
      out << '\n';
      if (static_cast<int64_t>(values.size()) < terms) {
        err << "note: stopped after " << values.size() << " terms: "
            << eval::StatusName(r.final.status) << '\n';
      }
    } else if (*check) {
      oeis::Corpus corpus = oeis::LoadStripped(corpus_path, max_terms);
      oeis::SequenceTrie trie = oeis::SequenceTrie::Build(corpus);
      synth::ImportTally tally;
      std::vector<synth::Candidate> cands = synth::ImportCandidates(pool_path, tp, &tally);
      std::vector<TokenString> pool;
      for (auto& c : cands) pool.push_back(std::move(c.tokens));
      SolutionStore store;
      if (!solutions_path.empty()) store = SolutionStore::Load(solutions_path);
      store.TakeEvents();
      checker::CheckConfig cfg;
      cfg.mode = *checker::ParseMode(mode_name);
      cfg.jobs = Jobs(jobs);
      checker::CheckReport report = checker::CheckPool(pool, trie, cfg, store, iteration);
      fs::create_directories(dir_path);
      store.Save((fs::path(dir_path) / "solutions.tsv").string());
      {
        std::ofstream j = OpenOut((fs::path(dir_path) / "journal.tsv").string());
        for (const JournalEvent& ev : store.TakeEvents()) j << FormatJournalEvent(ev) << '\n';
      }
      std::ostringstream rep;
      rep << "pool_lines: " << tally.lines << '\n'
          << "pool_malformed: " << tally.malformed << '\n'
          << "pool_invalid: " << tally.invalid << '\n';
      WriteCheckReport(rep, report, store.size());
      OpenOut((fs::path(dir_path) / "report.txt").string()) << rep.str();
      out << rep.str();
    } else if (*rgen) {
      synth::RandomConfig rc;
      rc.max_size = max_size;
      std::vector<synth::Candidate> cands;
      for (auto& t : synth::RandomPrograms(count, rc, seed)) cands.push_back({0, std::move(t)});
      std::ofstream f = OpenOut(out_path);
      synth::WriteCandidates(f, cands);
      out << "programs: " << cands.size() << '\n';
    } else if (*train) {
      std::vector<synth::TrainingPair> pairs = ReadPairs(src_path, tgt_path);
      synth::NGramModel m = synth::TrainGuidance(pairs, model_options, tp, FormByName(form_name));
      m.Save(model_path);
      out << "pairs: " << pairs.size() << '\n';
    } else if (*infer) {
      synth::NGramModel m = synth::NGramModel::Load(model_path);
      oeis::Corpus corpus = oeis::LoadStripped(corpus_path);
      beam.per_sequence_cap = beam.width;
      // One beam per source bucket, written under the bucket's first sequence.
      std::map<uint16_t, oeis::ANum> buckets;
      for (const auto& e : corpus) buckets.try_emplace(synth::SourceBucket(e.terms), e.anum);
      std::vector<std::pair<uint16_t, oeis::ANum>> todo(buckets.begin(), buckets.end());
      std::vector<std::vector<synth::BeamCandidate>> beams(todo.size());
      const synth::TargetForm form = FormByName(form_name);
      ParallelFor(todo.size(), Jobs(jobs), [&](size_t i) {
        beams[i] = synth::BeamGenerate(m, todo[i].first, beam, tp, form);
      });
      std::ofstream f = OpenOut(out_path);
      size_t lines = 0;
      for (size_t i = 0; i < todo.size(); ++i) {
        for (const auto& b : beams[i]) {
          f << oeis::FormatANum(todo[i].second) << '\t' << b.tokens.str() << '\n';
          ++lines;
        }
      }
      out << "buckets: " << todo.size() << '\n' << "candidates: " << lines << '\n';
    } else if (*loopc) {
      loop::LoopConfig cfg;
      std::optional<std::string> resume;
      if (!resume_dir.empty()) {
        resume = LatestStateDir(resume_dir);
        cfg = loop::IterationState::Load(*resume).config;
        cfg.out_dir = resume_dir;
      }
      if (!config_path.empty()) loop::ApplyConfigFile(cfg, config_path);
      for (const std::string& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value: " + s);
        auto trim = [](std::string v) {
          v.erase(0, v.find_first_not_of(' '));
          v.erase(v.find_last_not_of(' ') + 1);
          return v;
        };
        loop::SetConfigValue(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
      }
      if (!corpus_path.empty()) cfg.corpus = corpus_path;
      if (!dir_path.empty()) cfg.out_dir = dir_path;
      if (iterations >= 0) cfg.iterations = iterations;
      if (jobs > 0) cfg.jobs = jobs;
      cfg.Validate();
      auto reports = loop::RunLoop(cfg, resume, &out);
      out << "iterations_run: " << reports.size() << '\n';
    } else if (*macros) {
      SolutionStore store = SolutionStore::Load(solutions_path);
      lang::GlobalMacroTable t = table ? *table : lang::GlobalMacroTable{};
      auto mined = synth::MineGlobalMacros(synth::StoredPrograms(store), t, mining);
      size_t added = synth::AppendMacros(t, mined);
      t.Save(out_path);
      for (const auto& m : mined) out << m.count << '\t' << m.tokens.str() << '\n';
      out << "added: " << added << '\n';
    } else if (*stats) {
      analysis::History history = analysis::LoadHistory(dir_path);
      if (history.empty()) throw DataError("no iteration snapshots under " + dir_path);
      fs::create_directories(out_path);
      const fs::path o(out_path);
      std::ofstream evo = OpenOut((o / "evolution.csv").string());
      analysis::WriteEvolutionCsv(evo, analysis::EvolutionCurves(history));
      std::ofstream red = OpenOut((o / "reduction.csv").string());
      analysis::WriteReductionCsv(red, analysis::ReductionAfterDiscovery(history, horizon));
      std::ofstream bounds = OpenOut((o / "bounds.csv").string());
      analysis::WriteBoundsCsv(bounds, analysis::LinearBoundCensus(history.back().store));
      if (!patterns.empty()) {
        std::vector<std::string> names;
        std::vector<TokenString> pats;
        for (const std::string& p : patterns) {
          auto eq = p.find('=');
          if (eq == std::string::npos) throw CLI::ValidationError("--pattern", "expected NAME=TOKENS: " + p);
          names.push_back(p.substr(0, eq));
          pats.push_back(lang::ExpandAll(TokenString::Parse(p.substr(eq + 1)), tp));
        }
        std::ofstream census = OpenOut((o / "census.csv").string());
        analysis::WriteCensusCsv(
            census,
            analysis::ProliferationCensus(history, pats,
                                          subtree ? analysis::MatchMode::kSubtree
                                                  : analysis::MatchMode::kTokens),
            names);
      }
      analysis::WritePlotScripts(out_path);
      out << "snapshots: " << history.size() << '\n'
          << "solutions: " << history.back().store.size() << '\n';
    } else if (*transpile) {
      lang::PythonOptions po;
      if (!solutions_path.empty()) {
        SolutionStore store = SolutionStore::Load(solutions_path);
        fs::create_directories(out_path);
        for (const auto& [anum, rec] : store.records()) {
          const std::string file = oeis::FormatANum(anum) + ".py";
          OpenOut((fs::path(out_path) / file).string())
              << lang::TranspilePython(lang::Decode(rec.smallest.tokens), name, po);
        }
        out << "files: " << store.size() << '\n';
      } else {
        if (program.empty() && symbolic.empty()) throw CLI::RequiredError("--program or --symbolic");
        OpenOut(out_path) << lang::TranspilePython(ProgramArg(program, symbolic, tp), name, po);
      }
    } else if (*bcheck) {
      SolutionStore store = SolutionStore::Load(solutions_path);
      oeis::Corpus corpus = oeis::LoadStripped(corpus_path);
      auto bfiles = oeis::LoadBFileDir(bfile_dir);
      checker::GenReport g = checker::CheckGeneralization(store, corpus, bfiles,
                                                          eval::EvalLimits::Slow(), max_extra);
      for (SolutionKind k : {SolutionKind::kSmallest, SolutionKind::kFastest}) {
        const auto& c = g.counts[static_cast<size_t>(k)];
        out << KindName(k) << ": generalizes " << c[0] << " mismatch " << c[1] << " timeout "
            << c[2] << " percent " << g.Percent(k) << '\n';
      }
      if (!out_path.empty()) {
        std::ofstream f = OpenOut(out_path);
        f << "anum\tkind\tverdict\textension_terms\tproduced\n";
        for (const auto& r : g.records) {
          f << oeis::FormatANum(r.anum) << '\t' << KindName(r.kind) << '\t'
            << checker::GenClassName(r.verdict) << '\t' << r.extension_terms << '\t' << r.produced
            << '\n';
        }
      }
    }
  } catch (const CLI::Error& e) {
    err << "error: usage: " << OneLine(e.what()) << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: usage: " << OneLine(e.what()) << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: data: " << OneLine(e.what()) << '\n';
    return kData;
  } catch (const lang::LangError& e) {
    err << "error: data: " << OneLine(e.what()) << '\n';
    return kData;
  } catch (const oeis::OeisError& e) {
    err << "error: data: " << OneLine(e.what()) << '\n';
    return kData;
  } catch (const std::runtime_error& e) {
    err << "error: data: " << OneLine(e.what()) << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: internal: " << OneLine(e.what()) << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace seqsynth::cli
