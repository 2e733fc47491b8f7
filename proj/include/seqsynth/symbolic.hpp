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

#ifndef SEQSYNTH_SYMBOLIC_HPP_
#define SEQSYNTH_SYMBOLIC_HPP_

#include <string>
#include <string_view>

#include "seqsynth/lang.hpp"

namespace seqsynth::lang {

// Human-readable notation:
//
//   operand  := 0 | 1 | 2 | x | y | "(" expr ")"
//   expr     := operand (binop operand)*          left associative
//             | "if" operand "<=" "0" "then" operand "else" operand
//             | "loop" operand operand operand
//             | "loop2" operand operand operand operand operand
//             | "compr" operand operand
//   binop    := "+" | "-" | "*" | "div" | "mod"
//
// The printer parenthesizes every non-atomic operand, so
// ParseSymbolic(ToSymbolic(e)) == e.
std::string ToSymbolic(const Expr& e);

// Throws LangError(kSyntax) with the offending column.
Expr ParseSymbolic(std::string_view text);

}  // namespace seqsynth::lang

#endif  // SEQSYNTH_SYMBOLIC_HPP_
