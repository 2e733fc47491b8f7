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

#include "seqsynth/lang.hpp"

#include <cctype>
#include <fstream>

namespace seqsynth::lang {

namespace {

constexpr std::array<std::string_view, kNumOps> kOpNames = {
    "0", "1", "2",    "+",    "-", "*", "div",
    "mod", "if", "loop", "x", "y", "compr", "loop2"};

using Kind = LangError::Kind;

void DecodeAt(const std::string& s, size_t& pos, Expr& out) {
  if (pos >= s.size()) {
    throw LangError(Kind::kTruncatedProgram, "program ends mid-argument");
  }
  char c = s[pos++];
  if (!IsOpLetter(c)) {
    throw LangError(Kind::kInvalidToken,
                    std::string("not an operator token: ") + c);
  }
  out.op = OpOfLetter(c);
  int n = Arity(out.op);
  out.args.assign(n, Expr());
  for (int i = n - 1; i >= 0; --i) DecodeAt(s, pos, out.args[i]);
}

void EncodeInto(const Expr& e, std::string& out) {
  out.push_back(Letter(e.op));
  for (auto it = e.args.rbegin(); it != e.args.rend(); ++it) EncodeInto(*it, out);
}

void ExpandLocalInto(const std::string& seg,
                     const std::vector<std::string>& expanded_defs,
                     size_t defined_before, size_t total_defs, std::string& out) {
  for (char c : seg) {
    if (!IsLocalMacroToken(c)) {
      out.push_back(c);
      continue;
    }
    size_t idx = static_cast<size_t>(c - kLocalMacroFirst);
    if (idx >= total_defs) {
      throw LangError(Kind::kUndefinedMacro,
                      std::string("undefined local macro ") + c);
    }
    if (idx >= defined_before) {
      throw LangError(Kind::kForwardReference,
                      std::string("forward reference to local macro ") + c);
    }
    out += expanded_defs[idx];
  }
}

}  // namespace

std::string_view OpName(Op op) { return kOpNames[static_cast<int>(op)]; }

bool IsTokenChar(char c) {
  return IsOpLetter(c) || IsLocalMacroToken(c) || IsDigitToken(c) ||
         c == kLocalSeparator || c == kRefSeparator;
}

TokenString::TokenString(std::string compact) : chars_(std::move(compact)) {
  for (char c : chars_) {
    if (!IsTokenChar(c)) {
      throw LangError(Kind::kInvalidToken, std::string("invalid token '") + c + "'");
    }
  }
}

TokenString TokenString::Parse(std::string_view text) {
  std::string compact;
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j - i != 1) {
      throw LangError(Kind::kInvalidToken,
                      "invalid token '" + std::string(text.substr(i, j - i)) + "'");
    }
    compact.push_back(text[i]);
    i = j;
  }
  return TokenString(std::move(compact));
}

std::string TokenString::str() const {
  std::string out;
  out.reserve(chars_.size() * 2);
  for (size_t i = 0; i < chars_.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(chars_[i]);
  }
  return out;
}

bool TokenString::is_plain() const {
  for (char c : chars_) {
    if (!IsOpLetter(c)) return false;
  }
  return true;
}

Expr Decode(const TokenString& ts) {
  const std::string& s = ts.compact();
  size_t pos = 0;
  Expr out;
  DecodeAt(s, pos, out);
  if (pos != s.size()) {
    throw LangError(Kind::kTrailingTokens,
                    "tokens remain after a complete program");
  }
  return out;
}

std::optional<Expr> TryDecode(const TokenString& ts) {
  // Cheap arity scan first so that the common failure path does not throw.
  int need = 1;
  for (char c : ts.compact()) {
    if (need == 0 || !IsOpLetter(c)) return std::nullopt;
    need += Arity(OpOfLetter(c)) - 1;
  }
  if (need != 0) return std::nullopt;
  return Decode(ts);
}

TokenString Encode(const Expr& e) {
  std::string out;
  EncodeInto(e, out);
  return TokenString(std::move(out));
}

int ProgramSize(const Expr& e) {
  int n = 1;
  for (const Expr& a : e.args) n += ProgramSize(a);
  return n;
}

LocalMacroProgram LocalMacroProgram::FromTokens(const TokenString& ts) {
  std::vector<std::string> segments(1);
  for (char c : ts.compact()) {
    if (c == kLocalSeparator) {
      segments.emplace_back();
    } else {
      segments.back().push_back(c);
    }
  }
  LocalMacroProgram p;
  if (segments.size() - 1 > static_cast<size_t>(kMaxLocalMacros)) {
    throw LangError(Kind::kUndefinedMacro, "more than ten local definitions");
  }
  for (size_t i = 0; i + 1 < segments.size(); ++i) {
    if (segments[i].empty()) {
      throw LangError(Kind::kEmptyMacro, "empty local macro definition");
    }
    p.definitions.emplace_back(segments[i]);
  }
  p.body = TokenString(segments.back());
  return p;
}

TokenString LocalMacroProgram::ToTokens() const {
  std::string out;
  for (const TokenString& d : definitions) {
    out += d.compact();
    out.push_back(kLocalSeparator);
  }
  out += body.compact();
  return TokenString(std::move(out));
}

TokenString ExpandLocalMacros(const LocalMacroProgram& p) {
  if (p.definitions.size() > static_cast<size_t>(kMaxLocalMacros)) {
    throw LangError(Kind::kUndefinedMacro, "more than ten local definitions");
  }
  std::vector<std::string> expanded;
  expanded.reserve(p.definitions.size());
  for (size_t i = 0; i < p.definitions.size(); ++i) {
    std::string out;
    ExpandLocalInto(p.definitions[i].compact(), expanded, i, p.definitions.size(), out);
    if (out.empty()) throw LangError(Kind::kEmptyMacro, "empty macro expansion");
    expanded.push_back(std::move(out));
  }
  std::string body;
  ExpandLocalInto(p.body.compact(), expanded, expanded.size(), expanded.size(), body);
  TokenString result(std::move(body));
  if (!TryDecode(result)) {
    throw LangError(Kind::kExpansionNotAProgram,
                    "expanded body is not a program: " + result.str());
  }
  return result;
}

TokenString ExpandLocalMacros(const TokenString& ts) {
  if (ts.is_plain()) return ts;
  return ExpandLocalMacros(LocalMacroProgram::FromTokens(ts));
}

std::vector<UnitCode> SplitUnits(const TokenString& ts) {
  std::vector<UnitCode> units;
  const std::string& s = ts.compact();
  size_t i = 0;
  while (i < s.size()) {
    if (!IsDigitToken(s[i])) {
      if (s[i] == kRefSeparator) {
        throw LangError(Kind::kMalformedReference, "reference without digits");
      }
      units.push_back(static_cast<UnitCode>(s[i]));
      ++i;
      continue;
    }
    size_t j = i;
    int64_t index = 0;
    while (j < s.size() && IsDigitToken(s[j])) {
      index = index * 10 + (s[j] - '0');
      if (index > 100000000) {
        throw LangError(Kind::kIndexOutOfRange, "reference index too large");
      }
      ++j;
    }
    if (j == s.size() || s[j] != kRefSeparator) {
      throw LangError(Kind::kMalformedReference, "digits without separator");
    }
    if (j - i > 1 && s[i] == '0') {
      throw LangError(Kind::kMalformedReference, "leading zero in reference");
    }
    units.push_back(kRefBase + static_cast<UnitCode>(index));
    i = j + 1;
  }
  return units;
}

TokenString JoinUnits(const std::vector<UnitCode>& units) {
  std::string out;
  for (UnitCode u : units) {
    if (u >= kRefBase) {
      out += std::to_string(u - kRefBase);
      out.push_back(kRefSeparator);
    } else {
      out.push_back(static_cast<char>(u));
    }
  }
  return TokenString(std::move(out));
}

size_t GlobalMacroTable::Add(const TokenString& entry) {
  std::string expanded;
  for (UnitCode u : SplitUnits(entry)) {
    if (u >= kRefBase) {
      size_t idx = static_cast<size_t>(u - kRefBase);
      if (idx >= entries_.size()) {
        throw LangError(Kind::kIndexOutOfRange,
                        "macro references entry " + std::to_string(idx) +
                            " which is not below it");
      }
      expanded += expanded_[idx].compact();
    } else {
      expanded.push_back(static_cast<char>(u));
    }
  }
  if (expanded.empty()) throw LangError(Kind::kEmptyMacro, "empty global macro");
  entries_.push_back(entry);
  expanded_.emplace_back(std::move(expanded));
  return entries_.size() - 1;
}

bool GlobalMacroTable::Contains(const TokenString& entry) const {
  for (const TokenString& e : entries_) {
    if (e == entry) return true;
  }
  return false;
}

GlobalMacroTable GlobalMacroTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open macro table " + path);
  GlobalMacroTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    table.Add(TokenString::Parse(line));
  }
  return table;
}

void GlobalMacroTable::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write macro table " + path);
  for (const TokenString& e : entries_) out << e.str() << '\n';
}

TokenString ExpandGlobalMacros(const TokenString& ts, const GlobalMacroTable& table) {
  bool has_ref = false;
  for (char c : ts.compact()) has_ref |= IsDigitToken(c) || c == kRefSeparator;
  if (!has_ref) return ts;
  std::string out;
  for (UnitCode u : SplitUnits(ts)) {
    if (u >= kRefBase) {
      size_t idx = static_cast<size_t>(u - kRefBase);
      if (idx >= table.size()) {
        throw LangError(Kind::kIndexOutOfRange,
                        "reference to missing macro " + std::to_string(idx));
      }
      out += table.expanded(idx).compact();
    } else {
      out.push_back(static_cast<char>(u));
    }
  }
  return TokenString(std::move(out));
}

TokenString AbstractReplace(const TokenString& ts, const GlobalMacroTable& table) {
  std::vector<UnitCode> cur = SplitUnits(ts);
  for (size_t i = 0; i < table.size(); ++i) {
    std::vector<UnitCode> pat = SplitUnits(table.entry(i));
    if (pat.empty() || pat.size() > cur.size()) continue;
    std::vector<UnitCode> next;
    next.reserve(cur.size());
    size_t p = 0;
    while (p < cur.size()) {
      if (p + pat.size() <= cur.size() &&
          std::equal(pat.begin(), pat.end(), cur.begin() + static_cast<ptrdiff_t>(p))) {
        next.push_back(kRefBase + static_cast<UnitCode>(i));
        p += pat.size();
      } else {
        next.push_back(cur[p++]);
      }
    }
    cur = std::move(next);
  }
  return JoinUnits(cur);
}

TokenString ExpandAll(const TokenString& ts, const GlobalMacroTable* table) {
  TokenString out = ts;
  bool has_local = false;
  bool has_ref = false;
  for (char c : ts.compact()) {
    has_local |= IsLocalMacroToken(c) || c == kLocalSeparator;
    has_ref |= IsDigitToken(c) || c == kRefSeparator;
  }
  if (has_ref) {
    if (table == nullptr) {
      throw LangError(Kind::kIndexOutOfRange, "global reference without a macro table");
    }
    out = ExpandGlobalMacros(out, *table);
  }
  if (has_local) out = ExpandLocalMacros(out);
  if (!TryDecode(out)) {
    throw LangError(Kind::kExpansionNotAProgram, "not a program: " + out.str());
  }
  return out;
}

}  // namespace seqsynth::lang
