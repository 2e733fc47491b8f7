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
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace seqsynth::oeis {

namespace {

std::string_view Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool ParseUnsigned(std::string_view s, uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::string FormatANum(ANum a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "A%06u", a);
  return buf;
}

ANum ParseANum(std::string_view text) {
  std::string_view s = Trim(text);
  if (!s.empty() && (s[0] == 'A' || s[0] == 'a')) s.remove_prefix(1);
  uint64_t v = 0;
  if (!ParseUnsigned(s, v) || v > 0xffffffffull) {
    throw OeisError(OeisError::Kind::kMalformedLine,
                    "bad A-number '" + std::string(text) + "'");
  }
  return static_cast<ANum>(v);
}

Corpus ParseStripped(std::istream& in, size_t max_terms) {
  Corpus corpus;
  std::unordered_set<ANum> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = Trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw OeisError(OeisError::Kind::kMalformedLine,
                      "line " + std::to_string(lineno) + ": " + why, lineno);
    };
    size_t sp = s.find_first_of(" \t");
    if (sp == std::string_view::npos) fail("missing term list");
    SequenceEntry entry;
    try {
      entry.anum = ParseANum(s.substr(0, sp));
    } catch (const OeisError&) {
      fail("bad A-number");
    }
    std::string_view rest = Trim(s.substr(sp));
    if (rest.empty() || rest.front() != ',' || rest.back() != ',') {
      fail("term list must be enclosed in commas");
    }
    rest = rest.substr(1, rest.size() - 2);
    while (!rest.empty()) {
      size_t comma = rest.find(',');
      std::string_view tok = Trim(rest.substr(0, comma));
      try {
        entry.terms.push_back(Integer::Parse(tok));
      } catch (const std::invalid_argument&) {
        fail("bad term '" + std::string(tok) + "'");
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (max_terms > 0 && entry.terms.size() > max_terms) entry.terms.resize(max_terms);
    if (!seen.insert(entry.anum).second) {
      throw OeisError(OeisError::Kind::kDuplicateANum,
                      "line " + std::to_string(lineno) + ": duplicate " +
                          FormatANum(entry.anum),
                      lineno);
    }
    corpus.push_back(std::move(entry));
  }
  return corpus;
}

Corpus LoadStripped(const std::string& path, size_t max_terms) {
  std::ifstream in(path);
  if (!in) throw OeisError(OeisError::Kind::kMissingFile, "cannot open " + path);
  return ParseStripped(in, max_terms);
}

void WriteStripped(std::ostream& out, const Corpus& corpus) {
  for (const SequenceEntry& e : corpus) {
    out << FormatANum(e.anum) << " ,";
    for (const Integer& t : e.terms) out << t << ',';
    out << '\n';
  }
}

SequenceTrie SequenceTrie::Build(const Corpus& corpus) {
  // Insert in lexicographic order so that every node's children are created
  // in increasing value order, then group edges by parent.
  std::vector<uint32_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const auto& ta = corpus[a].terms;
    const auto& tb = corpus[b].terms;
    if (std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end())) return true;
    if (std::lexicographical_compare(tb.begin(), tb.end(), ta.begin(), ta.end())) return false;
    return corpus[a].anum < corpus[b].anum;
  });

  std::vector<uint32_t> parent{kNone};
  std::vector<uint32_t> depth{0};
  std::vector<const Integer*> label{nullptr};
  std::vector<std::vector<ANum>> node_marks(1);
  std::vector<uint32_t> path{0};  // path[d] = node at depth d of previous entry
  const std::vector<Integer>* prev = nullptr;
  for (uint32_t idx : order) {
    const auto& terms = corpus[idx].terms;
    size_t common = 0;
    if (prev != nullptr) {
      while (common < terms.size() && common < prev->size() &&
             terms[common] == (*prev)[common]) {
        ++common;
      }
    }
    path.resize(common + 1);
    for (size_t d = common; d < terms.size(); ++d) {
      uint32_t id = static_cast<uint32_t>(parent.size());
      parent.push_back(path.back());
      depth.push_back(static_cast<uint32_t>(d + 1));
      label.push_back(&terms[d]);
      node_marks.emplace_back();
      path.push_back(id);
    }
    node_marks[path[terms.size()]].push_back(corpus[idx].anum);
    prev = &terms;
  }

  SequenceTrie trie;
  const size_t n = parent.size();
  trie.nodes_.resize(n);
  std::vector<uint32_t> child_count(n, 0);
  for (size_t i = 1; i < n; ++i) ++child_count[parent[i]];
  uint32_t offset = 0;
  for (size_t i = 0; i < n; ++i) {
    trie.nodes_[i].first_edge = offset;
    trie.nodes_[i].num_edges = 0;
    trie.nodes_[i].depth = depth[i];
    offset += child_count[i];
  }
  trie.edges_.resize(n - 1);
  for (size_t i = 1; i < n; ++i) {
    Node& p = trie.nodes_[parent[i]];
    trie.edges_[p.first_edge + p.num_edges++] = Edge{*label[i], static_cast<uint32_t>(i)};
  }
  for (size_t i = 0; i < n; ++i) {
    auto& m = node_marks[i];
    std::sort(m.begin(), m.end());
    trie.nodes_[i].first_mark = static_cast<uint32_t>(trie.marks_.size());
    trie.nodes_[i].num_marks = static_cast<uint32_t>(m.size());
    trie.marks_.insert(trie.marks_.end(), m.begin(), m.end());
  }
  return trie;
}

uint32_t SequenceTrie::Child(uint32_t node, const Integer& value) const {
  const Node& n = nodes_[node];
  auto first = edges_.begin() + n.first_edge;
  auto last = first + n.num_edges;
  auto it = std::lower_bound(first, last, value,
                             [](const Edge& e, const Integer& v) { return e.value < v; });
  if (it == last || it->value != value) return kNone;
  return it->child;
}

std::vector<Integer> SequenceTrie::EdgeLabels(uint32_t node) const {
  const Node& n = nodes_[node];
  std::vector<Integer> out;
  for (uint32_t i = 0; i < n.num_edges; ++i) out.push_back(edges_[n.first_edge + i].value);
  return out;
}

bool TrieWalker::Feed(const Integer& value, int64_t cost) {
  uint32_t next = trie_->Child(report_.node, value);
  if (next == SequenceTrie::kNone) {
    report_.reason = StopReason::kMissingEdge;
    return false;
  }
  report_.node = next;
  report_.depth = trie_->depth(next);
  auto [b, e] = trie_->Marks(next);
  for (const ANum* p = b; p != e; ++p) report_.solved.push_back(Solved{*p, cost});
  if (trie_->IsLeaf(next)) {
    report_.reason = StopReason::kLeaf;
    return false;
  }
  report_.reason = StopReason::kStreamEnded;
  return true;
}

MatchReport TrieMatch(const SequenceTrie& trie, const std::vector<Integer>& stream) {
  TrieWalker w(trie);
  if (trie.IsLeaf(SequenceTrie::root())) {
    MatchReport r;
    r.reason = StopReason::kLeaf;
    return r;
  }
  for (const Integer& v : stream) {
    if (!w.Feed(v)) break;
  }
  return w.Take();
}

std::vector<Integer> BFile::Extension(size_t stored_count) const {
  std::vector<Integer> out;
  for (size_t i = stored_count; i < pairs.size(); ++i) out.push_back(pairs[i].second);
  return out;
}

BFile ParseBFile(std::istream& in, ANum anum) {
  BFile b;
  b.anum = anum;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = Trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t sp = s.find_first_of(" \t");
    auto fail = [&](OeisError::Kind k, const std::string& why) {
      throw OeisError(k, FormatANum(anum) + " b-file line " + std::to_string(lineno) + ": " + why,
                      lineno);
    };
    if (sp == std::string_view::npos) fail(OeisError::Kind::kMalformedLine, "expected 'index value'");
    std::string_view is = s.substr(0, sp);
    int64_t index = 0;
    auto [p, ec] = std::from_chars(is.data(), is.data() + is.size(), index);
    if (ec != std::errc() || p != is.data() + is.size()) {
      fail(OeisError::Kind::kMalformedLine, "bad index");
    }
    Integer value;
    try {
      value = Integer::Parse(Trim(s.substr(sp)));
    } catch (const std::invalid_argument&) {
      fail(OeisError::Kind::kMalformedLine, "bad value");
    }
    if (!b.pairs.empty() && index != b.pairs.back().first + 1) {
      fail(OeisError::Kind::kNonContiguousIndices, "indices not consecutive");
    }
    b.pairs.emplace_back(index, std::move(value));
  }
  if (b.pairs.empty()) {
    throw OeisError(OeisError::Kind::kEmpty, FormatANum(anum) + " b-file has no terms");
  }
  return b;
}

BFile LoadBFile(const std::string& path, ANum anum) {
  std::ifstream in(path);
  if (!in) throw OeisError(OeisError::Kind::kMissingFile, "cannot open " + path);
  if (anum == 0) {
    std::string stem = std::filesystem::path(path).stem().string();
    if (!stem.empty() && (stem[0] == 'b' || stem[0] == 'B')) stem.erase(0, 1);
    anum = ParseANum(stem);
  }
  return ParseBFile(in, anum);
}

std::map<ANum, BFile> LoadBFileDir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::map<ANum, BFile> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw OeisError(OeisError::Kind::kMissingFile, "not a directory: " + dir);
  }
  for (const auto& ent : fs::directory_iterator(dir)) {
    if (!ent.is_regular_file()) continue;
    std::string name = ent.path().filename().string();
    if (name.size() < 6 || name[0] != 'b' || ent.path().extension() != ".txt") continue;
    std::string digits = ent.path().stem().string().substr(1);
    uint64_t v = 0;
    if (!ParseUnsigned(digits, v)) continue;
    out.emplace(static_cast<ANum>(v), LoadBFile(ent.path().string(), static_cast<ANum>(v)));
  }
  return out;
}

}  // namespace seqsynth::oeis
