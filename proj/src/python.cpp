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

#include "seqsynth/python.hpp"

#include <vector>

namespace seqsynth::lang {

namespace {

constexpr const char* kDivHelpers =
    "def cdiv(a, b):\n"
    "    q = abs(a) // abs(b)\n"
    "    return q if (a >= 0) == (b >= 0) else -q\n"
    "\n"
    "def cmod(a, b):\n"
    "    return a - b * cdiv(a, b)\n"
    "\n";

class Emitter {
 public:
  explicit Emitter(const PythonOptions& options) : options_(options) {}

  // Returns a Python expression for `e` where the language variables x and y
  // are spelled `vx` and `vy`. Loop constructs become helper functions.
  std::string Emit(const Expr& e, const std::string& vx, const std::string& vy) {
    switch (e.op) {
      case Op::kZero:
        return "0";
      case Op::kOne:
        return "1";
      case Op::kTwo:
        return "2";
      case Op::kX:
        return vx;
      case Op::kY:
        return vy;
      case Op::kPlus:
        return "(" + Emit(e.args[0], vx, vy) + " + " + Emit(e.args[1], vx, vy) + ")";
      case Op::kMinus:
        return "(" + Emit(e.args[0], vx, vy) + " - " + Emit(e.args[1], vx, vy) + ")";
      case Op::kTimes:
        return "(" + Emit(e.args[0], vx, vy) + " * " + Emit(e.args[1], vx, vy) + ")";
      case Op::kDiv:
        uses_div_ = true;
        return "cdiv(" + Emit(e.args[0], vx, vy) + ", " + Emit(e.args[1], vx, vy) + ")";
      case Op::kMod:
        uses_div_ = true;
        return "cmod(" + Emit(e.args[0], vx, vy) + ", " + Emit(e.args[1], vx, vy) + ")";
      case Op::kCond:
        return "(" + Emit(e.args[1], vx, vy) + " if " + Emit(e.args[0], vx, vy) +
               " <= 0 else " + Emit(e.args[2], vx, vy) + ")";
      case Op::kLoop:
      case Op::kLoop2:
      case Op::kCompr:
        return Helper(e) + "(" + vx + ", " + vy + ")";
    }
    return "";
  }

  std::string Definitions() const {
    std::string out;
    if (uses_div_) out += kDivHelpers;
    for (const std::string& d : defs_) out += d + "\n";
    return out;
  }

 private:
  std::string Helper(const Expr& e) {
    std::string name = options_.helper_prefix + std::to_string(next_id_++);
    std::string body = "def " + name + "(X, Y):\n";
    if (e.op == Op::kLoop) {
      std::string b = Emit(e.args[2], "X", "Y");
      std::string a = Emit(e.args[1], "X", "Y");
      std::string f = Emit(e.args[0], "x", "y");
      body += "    x = " + b + "\n";
      body += "    for y in range(1, " + a + " + 1):\n";
      body += "        x = " + f + "\n";
      body += "    return x\n";
    } else if (e.op == Op::kLoop2) {
      std::string b = Emit(e.args[3], "X", "Y");
      std::string c = Emit(e.args[4], "X", "Y");
      std::string a = Emit(e.args[2], "X", "Y");
      std::string f = Emit(e.args[0], "x", "y");
      std::string g = Emit(e.args[1], "x", "y");
      body += "    x, y = " + b + ", " + c + "\n";
      body += "    for _ in range(1, " + a + " + 1):\n";
      body += "        x, y = " + f + ", " + g + "\n";
      body += "    return x\n";
    } else {
      std::string a = Emit(e.args[1], "X", "Y");
      std::string f = Emit(e.args[0], "x", "y");
      body += "    bound = " + a + "\n";
      body += "    x, y, i = 0, 0, 0\n";
      body += "    while i <= bound:\n";
      body += "        if " + f + " <= 0:\n";
      body += "            i = i + 1\n";
      body += "        x = x + 1\n";
      body += "    return x - 1\n";
    }
    defs_.push_back(std::move(body));
    return name;
  }

  const PythonOptions& options_;
  int next_id_ = 0;
  bool uses_div_ = false;
  std::vector<std::string> defs_;
};

}  // namespace

std::string TranspilePython(const Expr& e, const std::string& entry_name,
                            const PythonOptions& options) {
  Emitter emitter(options);
  std::string top = emitter.Emit(e, "X", "Y");
  std::string out = emitter.Definitions();
  out += "def " + entry_name + "(X, Y=0):\n";
  out += "    return " + top + "\n";
  if (options.with_main) {
    out += "\n\nif __name__ == \"__main__\":\n";
    out += "    import sys\n";
    out += "    n = int(sys.argv[1]) if len(sys.argv) > 1 else 32\n";
    out += "    for x in range(n):\n";
    out += "        print(" + entry_name + "(x))\n";
  }
  return out;
}

}  // namespace seqsynth::lang
