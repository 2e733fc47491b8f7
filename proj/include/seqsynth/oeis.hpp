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

#ifndef SEQSYNTH_OEIS_HPP_
#define SEQSYNTH_OEIS_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqsynth/integer.hpp"

namespace seqsynth::oeis {

using ANum = uint32_t;

// "A000045" for 45; at least six digits.
std::string FormatANum(ANum a);
// Accepts "A45", "A000045" or "45".
ANum ParseANum(std::string_view text);

class OeisError : public std::runtime_error {
 public:
  enum class Kind {
    kMissingFile,
    kMalformedLine,
    kDuplicateANum,
    kNonContiguousIndices,
    kEmpty,
  };
  OeisError(Kind kind, const std::string& what, int line = 0)
      : std::runtime_error(what), kind_(kind), line_(line) {}
  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

struct SequenceEntry {
  ANum anum = 0;
  std::vector<Integer> terms;
};

using Corpus = std::vector<SequenceEntry>;

// OEIS "stripped" format: "A000045 ,0,1,1,2,3,5," per line, '#' comments.
// max_terms > 0 truncates every entry.
Corpus ParseStripped(std::istream& in, size_t max_terms = 0);
Corpus LoadStripped(const std::string& path, size_t max_terms = 0);
void WriteStripped(std::ostream& out, const Corpus& corpus);

// Trie over all term lists. Node 0 is the root; edges out of a node are
// sorted by value. Marks on a node are the A-numbers whose stored terms end
// there (interior nodes can carry marks when one entry prefixes another).
class SequenceTrie {
 public:
  static constexpr uint32_t kNone = 0xffffffffu;

  static SequenceTrie Build(const Corpus& corpus);

  static constexpr uint32_t root() { return 0; }
  uint32_t Child(uint32_t node, const Integer& value) const;
  bool IsLeaf(uint32_t node) const { return nodes_[node].num_edges == 0; }
  uint32_t depth(uint32_t node) const { return nodes_[node].depth; }
  std::vector<Integer> EdgeLabels(uint32_t node) const;
  std::pair<const ANum*, const ANum*> Marks(uint32_t node) const {
    const Node& n = nodes_[node];
    return {marks_.data() + n.first_mark, marks_.data() + n.first_mark + n.num_marks};
  }

  size_t node_count() const { return nodes_.size(); }
  size_t mark_count() const { return marks_.size(); }

 private:
  struct Node {
    uint32_t first_edge = 0;
    uint32_t num_edges = 0;
    uint32_t first_mark = 0;
    uint32_t num_marks = 0;
    uint32_t depth = 0;
  };
  struct Edge {
    Integer value;
    uint32_t child;
  };

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<ANum> marks_;
};

enum class StopReason { kLeaf, kMissingEdge, kStreamEnded };

struct Solved {
  ANum anum;
  int64_t cost;  // cost reported alongside the term that completed it
};

struct MatchReport {
  std::vector<Solved> solved;
  uint32_t node = SequenceTrie::root();
  uint32_t depth = 0;
  StopReason reason = StopReason::kStreamEnded;
};

// Incremental matcher: feed terms as they are produced.
class TrieWalker {
 public:
  explicit TrieWalker(const SequenceTrie& trie) : trie_(&trie) {}

  // Returns false when matching must stop (leaf reached or missing edge).
  bool Feed(const Integer& value, int64_t cost = 0);

  const MatchReport& report() const { return report_; }
  MatchReport Take() { return std::move(report_); }

 private:
  const SequenceTrie* trie_;
  MatchReport report_;
};

MatchReport TrieMatch(const SequenceTrie& trie, const std::vector<Integer>& stream);

// b-file: "index value" lines, '#' comments.
struct BFile {
  ANum anum = 0;
  std::vector<std::pair<int64_t, Integer>> pairs;

  // Values strictly after the first `stored_count` indices.
  std::vector<Integer> Extension(size_t stored_count) const;
};

BFile ParseBFile(std::istream& in, ANum anum);
BFile LoadBFile(const std::string& path, ANum anum = 0);
// Loads every "bNNNNNN.txt" in a directory.
std::map<ANum, BFile> LoadBFileDir(const std::string& dir);

}  // namespace seqsynth::oeis

#endif  // SEQSYNTH_OEIS_HPP_
