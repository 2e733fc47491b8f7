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

#ifndef SEQSYNTH_PYTHON_HPP_
#define SEQSYNTH_PYTHON_HPP_

#include <string>

#include "seqsynth/lang.hpp"

namespace seqsynth::lang {

struct PythonOptions {
  // Append a __main__ block printing entry(0..n-1), n from argv (default 32).
  bool with_main = true;
  // Prefix for helper functions (one per loop, loop2 and compr node,
  // numbered in pre-order).
  std::string helper_prefix = "f";
};

// Emits a self-contained Python 3 module defining `entry_name(X, Y=0)`.
// Arithmetic follows the native evaluator exactly, including truncating
// div/mod on negative operands.
std::string TranspilePython(const Expr& e, const std::string& entry_name,
                            const PythonOptions& options = {});

}  // namespace seqsynth::lang

#endif  // SEQSYNTH_PYTHON_HPP_
