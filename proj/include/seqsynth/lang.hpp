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

// The program language: fourteen operators over two integer variables x, y.
//
//   0 1 2 x y              constants and variables
//   + - * div mod          integer arithmetic (div/mod truncate toward zero)
//   cond(a, b, c)          if a <= 0 then b else c
//   loop(f, a, b)          x := b; for y in 1..a: x := f(x, y)
//   loop2(f, g, a, b, c)   (x, y) := (b, c); repeat a times:
//                            (x, y) := (f(x, y), g(x, y))
//   compr(f, a)            the (a+1)-th smallest m >= 0 with f(m, 0) <= 0
//
// The first arguments of loop/loop2/compr are functions of their own (x, y);
// the remaining arguments are evaluated in the enclosing scope.
//
// Linear form: each operator is a letter A..N, written in prefix order with
// its arguments in reversed order. loop(x * y, x, 1) is "J B K F L K".

#ifndef SEQSYNTH_LANG_HPP_
#define SEQSYNTH_LANG_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqsynth::lang {

enum class Op : uint8_t {
  kZero,
  kOne,
  kTwo,
  kPlus,
  kMinus,
  kTimes,
  kDiv,
  kMod,
  kCond,
  kLoop,
  kX,
  kY,
  kCompr,
  kLoop2,
};

inline constexpr int kNumOps = 14;

inline constexpr std::array<int, kNumOps> kArity = {
    0, 0, 0, 2, 2, 2, 2, 2, 3, 3, 0, 0, 2, 5};

constexpr int Arity(Op op) { return kArity[static_cast<int>(op)]; }
constexpr char Letter(Op op) { return static_cast<char>('A' + static_cast<int>(op)); }
constexpr bool IsOpLetter(char c) { return c >= 'A' && c <= 'N'; }
constexpr Op OpOfLetter(char c) { return static_cast<Op>(c - 'A'); }

// Symbolic name used by the pretty-printer ("+", "div", "loop2", ...).
std::string_view OpName(Op op);

// Macro and reference glyphs.
inline constexpr int kMaxLocalMacros = 10;
inline constexpr char kLocalMacroFirst = 'O';  // O..X name macros 0..9
inline constexpr char kLocalSeparator = '|';
inline constexpr char kRefSeparator = '#';  // ends a base-10 global reference
inline constexpr char kEndToken = '$';      // end of output in free decoding

constexpr bool IsLocalMacroToken(char c) {
  return c >= kLocalMacroFirst && c < kLocalMacroFirst + kMaxLocalMacros;
}
constexpr bool IsDigitToken(char c) { return c >= '0' && c <= '9'; }

class LangError : public std::runtime_error {
 public:
  enum class Kind {
    kInvalidToken,
    kTruncatedProgram,
    kTrailingTokens,
    kUndefinedMacro,
    kForwardReference,
    kEmptyMacro,
    kExpansionNotAProgram,
    kIndexOutOfRange,
    kMalformedReference,
    kSyntax,
  };
  LangError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Expr {
  Op op = Op::kZero;
  std::vector<Expr> args;

  Expr() = default;
  explicit Expr(Op o) : op(o) {}
  Expr(Op o, std::vector<Expr> a) : op(o), args(std::move(a)) {}

  friend bool operator==(const Expr&, const Expr&) = default;
};

// Builders for readable fixtures.
namespace build {
inline Expr Zero() { return Expr(Op::kZero); }
inline Expr One() { return Expr(Op::kOne); }
inline Expr Two() { return Expr(Op::kTwo); }
inline Expr X() { return Expr(Op::kX); }
inline Expr Y() { return Expr(Op::kY); }
inline Expr Plus(Expr a, Expr b) { return Expr(Op::kPlus, {std::move(a), std::move(b)}); }
inline Expr Minus(Expr a, Expr b) { return Expr(Op::kMinus, {std::move(a), std::move(b)}); }
inline Expr Times(Expr a, Expr b) { return Expr(Op::kTimes, {std::move(a), std::move(b)}); }
inline Expr Div(Expr a, Expr b) { return Expr(Op::kDiv, {std::move(a), std::move(b)}); }
inline Expr Mod(Expr a, Expr b) { return Expr(Op::kMod, {std::move(a), std::move(b)}); }
inline Expr Cond(Expr a, Expr b, Expr c) {
  return Expr(Op::kCond, {std::move(a), std::move(b), std::move(c)});
}
inline Expr Loop(Expr f, Expr a, Expr b) {
  return Expr(Op::kLoop, {std::move(f), std::move(a), std::move(b)});
}
inline Expr Loop2(Expr f, Expr g, Expr a, Expr b, Expr c) {
  return Expr(Op::kLoop2,
              {std::move(f), std::move(g), std::move(a), std::move(b), std::move(c)});
}
inline Expr Compr(Expr f, Expr a) { return Expr(Op::kCompr, {std::move(f), std::move(a)}); }
}  // namespace build

// A linear program over the token alphabet A..N, O..X, '|', '0'..'9', '#'.
// Stored compactly (one char per token); the text form separates tokens with
// single spaces.
class TokenString {
 public:
  TokenString() = default;
  // Throws LangError(kInvalidToken) for characters outside the alphabet.
  explicit TokenString(std::string compact);

  // Parses whitespace-separated single-character tokens.
  static TokenString Parse(std::string_view text);

  std::string str() const;
  const std::string& compact() const { return chars_; }
  size_t size() const { return chars_.size(); }
  bool empty() const { return chars_.empty(); }
  char operator[](size_t i) const { return chars_[i]; }

  // True iff every token is an operator letter.
  bool is_plain() const;

  friend auto operator<=>(const TokenString&, const TokenString&) = default;

 private:
  std::string chars_;
};

struct TokenStringHash {
  size_t operator()(const TokenString& t) const {
    return std::hash<std::string>{}(t.compact());
  }
};

bool IsTokenChar(char c);

// Prefix codec. Decode consumes the whole string or throws
// (kTruncatedProgram / kTrailingTokens / kInvalidToken).
Expr Decode(const TokenString& ts);
std::optional<Expr> TryDecode(const TokenString& ts);
TokenString Encode(const Expr& e);

// Number of nodes; equals the encoded length.
int ProgramSize(const Expr& e);

// Local macros: "def0 | def1 | ... | body", each definition an arbitrary
// action sequence that may use lower-indexed macro tokens.
struct LocalMacroProgram {
  std::vector<TokenString> definitions;
  TokenString body;

  // Splits on the local separator. Throws kEmptyMacro for empty
  // definitions and kUndefinedMacro if there are more than ten.
  static LocalMacroProgram FromTokens(const TokenString& ts);
  TokenString ToTokens() const;
};

TokenString ExpandLocalMacros(const LocalMacroProgram& p);
// Convenience: parses the segments first. Plain inputs come back unchanged.
TokenString ExpandLocalMacros(const TokenString& ts);

// Decoding unit: one token, or a whole global reference "<digits>#".
// Codes below kRefBase are token chars; kRefBase + i references entry i.
using UnitCode = int32_t;
inline constexpr UnitCode kRefBase = 128;

std::vector<UnitCode> SplitUnits(const TokenString& ts);
TokenString JoinUnits(const std::vector<UnitCode>& units);

class GlobalMacroTable {
 public:
  GlobalMacroTable() = default;

  // Appends an entry. It may reference only existing entries; its expansion
  // must be nonempty. Returns the new index.
  size_t Add(const TokenString& entry);

  size_t size() const { return entries_.size(); }
  const TokenString& entry(size_t i) const { return entries_[i]; }
  const TokenString& expanded(size_t i) const { return expanded_[i]; }
  const std::vector<TokenString>& entries() const { return entries_; }
  bool Contains(const TokenString& entry) const;

  // One entry per line, tokens space separated.
  static GlobalMacroTable Load(const std::string& path);
  void Save(const std::string& path) const;

 private:
  std::vector<TokenString> entries_;
  std::vector<TokenString> expanded_;
};

TokenString ExpandGlobalMacros(const TokenString& ts, const GlobalMacroTable& table);

// Greedy abstraction: for each entry from the lowest index up, scan left to
// right and replace every non-overlapping occurrence by its reference.
TokenString AbstractReplace(const TokenString& ts, const GlobalMacroTable& table);

// Expands whatever macros a candidate carries (local segments and global
// references) to a plain token string. Throws LangError on failure.
TokenString ExpandAll(const TokenString& ts, const GlobalMacroTable* table);

}  // namespace seqsynth::lang

#endif  // SEQSYNTH_LANG_HPP_
