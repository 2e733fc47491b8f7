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

// Cost-metered evaluation.
//
// Every node evaluation charges abstract time: 5 for div/mod, 1 for
// everything else, or the bit length of the result when it needs more than
// 64 bits. A sequence program f is run as f(0,0), f(1,0), ... and the
// cumulative budget after term n is (n+1) * t_call.
//
// compr(f, i) values are served from a per-run cache. Entry f holds
// compr(f,0), compr(f,1), ... computed incrementally, each from its
// predecessor; producing values 0..k may cost at most (k+1) * t_call on the
// entry's own meter and at most n_compr values are ever produced. A lookup
// past what the entry could produce is a ComprLimit abort.

#ifndef SEQSYNTH_EVAL_HPP_
#define SEQSYNTH_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seqsynth/integer.hpp"
#include "seqsynth/lang.hpp"

namespace seqsynth::eval {

struct EvalLimits {
  int64_t t_call = 1000;
  int n_compr = 20;
  Integer max_magnitude = DefaultMaxMagnitude();

  static Integer DefaultMaxMagnitude();  // 10^285
  static EvalLimits Fast() { return {1000, 20, DefaultMaxMagnitude()}; }
  static EvalLimits Slow() { return {100000, 200, DefaultMaxMagnitude()}; }
};

enum class Status : uint8_t {
  kValue,
  kTimeout,
  kMagnitudeAbort,
  kComprLimit,
  kComprFailure,
  kDivByZero,
};

inline constexpr int kNumStatuses = 6;

std::string_view StatusName(Status s);

struct EvalOutcome {
  Status status = Status::kValue;
  Integer value;  // meaningful only for kValue
  int64_t spent = 0;

  bool ok() const { return status == Status::kValue; }
};

struct CostMeter {
  int64_t spent = 0;
  int64_t budget = 0;

  // Adds `cost`; false once spent exceeds the budget.
  bool Charge(int64_t cost) {
    spent += cost;
    return spent <= budget;
  }
};

int64_t CostOf(lang::Op op, const Integer& result);

struct ComprEntry {
  std::vector<Integer> values;  // compr(f,0), compr(f,1), ...
  Integer next_candidate = 0;   // next m to test
  CostMeter meter;
  bool closed = false;          // no further values will be produced
  Status stop = Status::kValue; // why it closed (kComprLimit when full)
};

// One compiled program plus its compr cache. Not thread-safe; create one
// per evaluation thread.
class Evaluator {
 public:
  Evaluator(const lang::Expr& program, EvalLimits limits);

  // Evaluates at (x, y) charging `meter`; aborts as soon as the meter is
  // exhausted. The compr cache persists across calls.
  EvalOutcome Eval(const Integer& x, const Integer& y, CostMeter& meter);

  // Abstract time consumed by compr precomputation so far.
  int64_t cache_spent() const;
  const std::vector<ComprEntry>& cache() const { return cache_; }
  const EvalLimits& limits() const { return limits_; }

  // Ensures cache entry `slot` holds value `index` if it can; used by
  // PrecomputeCompr.
  bool ExtendCompr(uint32_t slot, int64_t index);
  size_t num_compr_slots() const { return cache_.size(); }

 private:
  struct Node {
    lang::Op op;
    uint8_t arity;
    uint32_t slot;  // compr cache slot
    uint32_t child[5];
  };

  uint32_t Compile(const lang::Expr& e,
                   std::unordered_map<std::string, uint32_t>& slots);
  Status EvalNode(uint32_t n, const Integer& x, const Integer& y,
                  CostMeter& meter, Integer& out);
  Status Finish(lang::Op op, CostMeter& meter, const Integer& out) const;

  EvalLimits limits_;
  unsigned magnitude_bits_;
  std::vector<Node> nodes_;
  std::vector<uint32_t> slot_fn_;  // slot -> node of f
  std::vector<ComprEntry> cache_;
};

// Evaluates one expression at (x, y) with a budget of a single t_call.
EvalOutcome EvalExpr(const lang::Expr& e, const Integer& x, const Integer& y,
                     const EvalLimits& limits);

// Runs the precomputation for compr(f, .) on its own: values until n_compr
// or the cumulative (i+1) * t_call timeout.
ComprEntry PrecomputeCompr(const lang::Expr& f, const EvalLimits& limits);

struct TermInfo {
  int64_t index;
  const Integer& value;
  // Abstract time spent so far, including compr precomputation.
  int64_t total_cost;
  // Top-level spent only; never above (index + 1) * t_call.
  int64_t spent;
};

struct RunResult {
  EvalOutcome final;          // status of the first failing term, if any
  bool stopped_by_consumer = false;
  int64_t terms = 0;          // terms delivered to the consumer
  int64_t total_cost = 0;     // top-level spent plus compr precomputation
};

// Streams f(0,0), f(1,0), ... into `consumer` until it returns false or a
// term fails.
RunResult RunSequenceProgram(Evaluator& evaluator,
                             const std::function<bool(const TermInfo&)>& consumer);
RunResult RunSequenceProgram(const lang::Expr& e, const EvalLimits& limits,
                             const std::function<bool(const TermInfo&)>& consumer);

// Convenience for tests and the CLI: the first `n` terms (fewer on abort).
RunResult FirstTerms(const lang::Expr& e, const EvalLimits& limits, int64_t n,
                     std::vector<Integer>& out);

}  // namespace seqsynth::eval

#endif  // SEQSYNTH_EVAL_HPP_
