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

#include "seqsynth/symbolic.hpp"

#include <cctype>
#include <vector>

namespace seqsynth::lang {

namespace {

bool IsAtom(const Expr& e) { return Arity(e.op) == 0; }

void Print(const Expr& e, std::string& out);

void PrintOperand(const Expr& e, std::string& out) {
  if (IsAtom(e)) {
    Print(e, out);
    return;
  }
  out.push_back('(');
  Print(e, out);
  out.push_back(')');
}

void Print(const Expr& e, std::string& out) {
  switch (e.op) {
    case Op::kZero:
    case Op::kOne:
    case Op::kTwo:
    case Op::kX:
    case Op::kY:
      out += OpName(e.op);
      return;
    case Op::kPlus:
    case Op::kMinus:
    case Op::kTimes:
    case Op::kDiv:
    case Op::kMod:
      PrintOperand(e.args[0], out);
      out.push_back(' ');
      out += OpName(e.op);
      out.push_back(' ');
      PrintOperand(e.args[1], out);
      return;
    case Op::kCond:
      out += "if ";
      PrintOperand(e.args[0], out);
      out += " <= 0 then ";
      PrintOperand(e.args[1], out);
      out += " else ";
      PrintOperand(e.args[2], out);
      return;
    case Op::kLoop:
    case Op::kLoop2:
    case Op::kCompr:
      out += OpName(e.op);
      for (const Expr& a : e.args) {
        out.push_back(' ');
        PrintOperand(a, out);
      }
      return;
  }
}

struct Lexeme {
  std::string text;
  size_t column;
};

std::vector<Lexeme> Lex(std::string_view s) {
  std::vector<Lexeme> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalnum(c)) {
      size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({std::string(s.substr(i, j - i)), i});
      i = j;
    } else if (s.substr(i, 2) == "<=") {
      out.push_back({"<=", i});
      i += 2;
    } else if (c == '(' || c == ')' || c == '+' || c == '-' || c == '*') {
      out.push_back({std::string(1, s[i]), i});
      ++i;
    } else {
      throw LangError(LangError::Kind::kSyntax,
                      "unexpected character '" + std::string(1, s[i]) +
                          "' at column " + std::to_string(i));
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Lexeme> lex) : lex_(std::move(lex)) {}

  Expr ParseAll() {
    Expr e = ParseExpr();
    if (pos_ != lex_.size()) Fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    size_t col = pos_ < lex_.size() ? lex_[pos_].column : std::string::npos;
    throw LangError(LangError::Kind::kSyntax,
                    what + (col == std::string::npos
                                ? " at end of input"
                                : " at column " + std::to_string(col)));
  }

  const std::string* Peek() const {
    return pos_ < lex_.size() ? &lex_[pos_].text : nullptr;
  }

  void Expect(const std::string& t) {
    if (!Peek() || *Peek() != t) Fail("expected '" + t + "'");
    ++pos_;
  }

  Expr ParseCall(Op op) {
    std::vector<Expr> args;
    for (int i = 0; i < Arity(op); ++i) args.push_back(ParseOperand());
    return Expr(op, std::move(args));
  }

  Expr ParseExpr() {
    const std::string* t = Peek();
    if (!t) Fail("expected expression");
    if (*t == "if") {
      ++pos_;
      Expr a = ParseOperand();
      Expect("<=");
      Expect("0");
      Expect("then");
      Expr b = ParseOperand();
      Expect("else");
      Expr c = ParseOperand();
      return Expr(Op::kCond, {std::move(a), std::move(b), std::move(c)});
    }
    if (*t == "loop") {
      ++pos_;
      return ParseCall(Op::kLoop);
    }
    if (*t == "loop2") {
      ++pos_;
      return ParseCall(Op::kLoop2);
    }
    if (*t == "compr") {
      ++pos_;
      return ParseCall(Op::kCompr);
    }
    Expr lhs = ParseOperand();
    while (const std::string* op = Peek()) {
      Op bin;
      if (*op == "+") {
        bin = Op::kPlus;
      } else if (*op == "-") {
        bin = Op::kMinus;
      } else if (*op == "*") {
        bin = Op::kTimes;
      } else if (*op == "div") {
        bin = Op::kDiv;
      } else if (*op == "mod") {
        bin = Op::kMod;
      } else {
        break;
      }
      ++pos_;
      Expr rhs = ParseOperand();
      lhs = Expr(bin, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr ParseOperand() {
    const std::string* t = Peek();
    if (!t) Fail("expected operand");
    if (*t == "(") {
      ++pos_;
      Expr e = ParseExpr();
      Expect(")");
      return e;
    }
    ++pos_;
    if (*t == "0") return Expr(Op::kZero);
    if (*t == "1") return Expr(Op::kOne);
    if (*t == "2") return Expr(Op::kTwo);
    if (*t == "x") return Expr(Op::kX);
    if (*t == "y") return Expr(Op::kY);
    --pos_;
    Fail("unexpected '" + *t + "'");
  }

  std::vector<Lexeme> lex_;
  size_t pos_ = 0;
};

}  // namespace

std::string ToSymbolic(const Expr& e) {
  std::string out;
  Print(e, out);
  return out;
}

Expr ParseSymbolic(std::string_view text) { return Parser(Lex(text)).ParseAll(); }

}  // namespace seqsynth::lang
