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

#include "seqsynth/oeis.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "seqsynth/eval.hpp"
#include "support/oracles.hpp"

namespace seqsynth::oeis {
namespace {

std::vector<Integer> V(std::initializer_list<int64_t> xs) {
  return std::vector<Integer>(xs.begin(), xs.end());
}

std::vector<ANum> SolvedSet(const MatchReport& r) {
  std::vector<ANum> out;
  for (const Solved& s : r.solved) out.push_back(s.anum);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(OeisTest, FormatsANumbers) {
  EXPECT_EQ(FormatANum(45), "A000045");
  EXPECT_EQ(FormatANum(1234567), "A1234567");
  EXPECT_EQ(ParseANum("A000045"), 45u);
  EXPECT_EQ(ParseANum("45"), 45u);
  EXPECT_THROW(ParseANum("Axyz"), OeisError);
}

TEST(OeisTest, ParsesStrippedFormat) {
  std::istringstream in(
      "# OEIS header\n"
      "A000045 ,0,1,1,2,3,5,8,\n"
      "\n"
      "A000004 ,0,0,0,\n"
      "A999999 ,-1,123456789012345678901234567890,\n");
  Corpus c = ParseStripped(in);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].anum, 45u);
  EXPECT_EQ(c[0].terms, V({0, 1, 1, 2, 3, 5, 8}));
  EXPECT_EQ(c[2].terms[1].to_string(), "123456789012345678901234567890");
  std::istringstream again(
      "A000045 ,0,1,1,2,3,5,8,\n");
  EXPECT_EQ(ParseStripped(again, 3)[0].terms, V({0, 1, 1}));
}

TEST(OeisTest, RejectsMalformedStripped) {
  for (const char* bad : {"A000045 0,1,\n", "A000045 ,0,x,\n", "B12 ,1,\n", "A000045\n",
                          "A000045 ,1,\nA000045 ,2,\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(ParseStripped(in), OeisError) << bad;
  }
  std::istringstream dup("A1 ,1,\nA1 ,2,\n");
  try {
    ParseStripped(dup);
    FAIL();
  } catch (const OeisError& e) {
    EXPECT_EQ(e.kind(), OeisError::Kind::kDuplicateANum);
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(LoadStripped("/nonexistent/stripped"), OeisError);
}

TEST(OeisTest, WriteReadRoundTrip) {
  Corpus c = oracle::SyntheticCorpus(80, 1, 20);
  std::stringstream io;
  WriteStripped(io, c);
  Corpus back = ParseStripped(io);
  ASSERT_EQ(back.size(), c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(back[i].anum, c[i].anum);
    EXPECT_EQ(back[i].terms, c[i].terms);
  }
}

TEST(OeisTest, TrieMarksPrefixesAndLeaves) {
  Corpus c = {{1, V({1, 2, 3})}, {2, V({1, 2})}, {3, V({1, 2, 4})}, {4, V({5})},
              {5, V({1, 2, 3})}};
  SequenceTrie trie = SequenceTrie::Build(c);
  EXPECT_EQ(trie.node_count(), 6u);  // root, 1, 2, 3, 4, 5
  EXPECT_EQ(trie.mark_count(), 5u);

  MatchReport r = TrieMatch(trie, V({1, 2, 3, 9}));
  EXPECT_EQ(SolvedSet(r), (std::vector<ANum>{1, 2, 5}));
  EXPECT_EQ(r.reason, StopReason::kLeaf);
  EXPECT_EQ(r.depth, 3u);

  r = TrieMatch(trie, V({1, 7}));
  EXPECT_TRUE(r.solved.empty());
  EXPECT_EQ(r.reason, StopReason::kMissingEdge);
  EXPECT_EQ(r.depth, 1u);

  r = TrieMatch(trie, V({1, 2}));
  EXPECT_EQ(SolvedSet(r), (std::vector<ANum>{2}));
  EXPECT_EQ(r.reason, StopReason::kStreamEnded);

  EXPECT_EQ(trie.EdgeLabels(SequenceTrie::root()), V({1, 5}));
}

TEST(OeisTest, WalkerReportsCostAtCompletion) {
  Corpus c = {{7, V({0, 1})}, {8, V({0, 1, 2})}};
  SequenceTrie trie = SequenceTrie::Build(c);
  TrieWalker w(trie);
  EXPECT_TRUE(w.Feed(0, 10));
  EXPECT_TRUE(w.Feed(1, 25));
  EXPECT_FALSE(w.Feed(2, 40));
  const MatchReport& r = w.report();
  ASSERT_EQ(r.solved.size(), 2u);
  EXPECT_EQ(r.solved[0].anum, 7u);
  EXPECT_EQ(r.solved[0].cost, 25);
  EXPECT_EQ(r.solved[1].cost, 40);
}

TEST(OeisTest, TrieAgreesWithNaiveScan) {
  Corpus corpus = oracle::SyntheticCorpus(300, 9, 16);
  // Add prefixes of existing entries so interior marks are exercised.
  for (int i = 0; i < 20; ++i) {
    SequenceEntry e = corpus[i * 7];
    e.anum = 800000 + i;
    e.terms.resize(5 + i % 7);
    corpus.push_back(e);
  }
  SequenceTrie trie = SequenceTrie::Build(corpus);
  std::mt19937_64 rng(4);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) {
    lang::Expr p = oracle::RandomExpr(rng, 14);
    std::vector<Integer> stream;
    eval::FirstTerms(p, eval::EvalLimits::Fast(), 20, stream);
    MatchReport r = TrieMatch(trie, stream);
    std::vector<ANum> naive = oracle::NaiveMatches(corpus, stream);
    ASSERT_EQ(SolvedSet(r), naive);
    hits += !naive.empty();
  }
  // Streams taken straight from the corpus must match their own entries.
  for (const SequenceEntry& e : corpus) {
    std::vector<ANum> got = SolvedSet(TrieMatch(trie, e.terms));
    ASSERT_TRUE(std::binary_search(got.begin(), got.end(), e.anum));
    ASSERT_EQ(got, oracle::NaiveMatches(corpus, e.terms));
  }
  EXPECT_GT(hits, 0);
}

TEST(OeisTest, BFileAlignmentAndErrors) {
  std::istringstream in("# comment\n1 2\n2 3\n3 5\n4 7\n5 11\n");
  BFile b = ParseBFile(in, 40);
  ASSERT_EQ(b.pairs.size(), 5u);
  EXPECT_EQ(b.pairs.front().first, 1);
  EXPECT_EQ(b.Extension(3), V({7, 11}));
  EXPECT_TRUE(b.Extension(9).empty());

  std::istringstream gap("0 1\n2 1\n");
  EXPECT_THROW(ParseBFile(gap, 1), OeisError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(ParseBFile(empty, 1), OeisError);
  std::istringstream junk("0 x\n");
  EXPECT_THROW(ParseBFile(junk, 1), OeisError);
}

TEST(OeisTest, LoadsFixtureFiles) {
  Corpus c = LoadStripped(std::string(SEQSYNTH_FIXTURES) + "/stripped_small");
  EXPECT_GE(c.size(), 10u);
  auto bfiles = LoadBFileDir(std::string(SEQSYNTH_FIXTURES) + "/bfiles");
  ASSERT_TRUE(bfiles.count(45));
  const SequenceEntry* fib = nullptr;
  for (const auto& e : c) {
    if (e.anum == 45) fib = &e;
  }
  ASSERT_NE(fib, nullptr);
  std::vector<Integer> ext = bfiles.at(45).Extension(fib->terms.size());
  std::vector<Integer> all = oracle::Fibonacci(static_cast<int>(fib->terms.size() + ext.size()));
  EXPECT_EQ(std::vector<Integer>(all.begin() + fib->terms.size(), all.end()), ext);
}

}  // namespace
}  // namespace seqsynth::oeis
