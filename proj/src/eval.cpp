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

#include "seqsynth/eval.hpp"

#include <limits>

namespace seqsynth::eval {

using lang::Op;

Integer EvalLimits::DefaultMaxMagnitude() {
  static const Integer kBound(BigInt(boost::multiprecision::pow(BigInt(10), 285)));
  return kBound;
}

std::string_view StatusName(Status s) {
  switch (s) {
    case Status::kValue:
      return "value";
    case Status::kTimeout:
      return "timeout";
    case Status::kMagnitudeAbort:
      return "magnitude";
    case Status::kComprLimit:
      return "compr_limit";
    case Status::kComprFailure:
      return "compr_failure";
    case Status::kDivByZero:
      return "div_by_zero";
  }
  return "?";
}

int64_t CostOf(Op op, const Integer& result) {
  if (!result.is_small()) {
    unsigned bits = result.bit_length();
    if (bits > 64) return bits;
  }
  return (op == Op::kDiv || op == Op::kMod) ? 5 : 1;
}

Evaluator::Evaluator(const lang::Expr& program, EvalLimits limits)
    : limits_(std::move(limits)),
      magnitude_bits_(limits_.max_magnitude.bit_length()) {
  std::unordered_map<std::string, uint32_t> slots;
  Compile(program, slots);
  cache_.resize(slot_fn_.size());
}

uint32_t Evaluator::Compile(const lang::Expr& e,
                            std::unordered_map<std::string, uint32_t>& slots) {
  uint32_t id = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back(Node{e.op, static_cast<uint8_t>(e.args.size()), 0, {}});
  for (size_t i = 0; i < e.args.size(); ++i) {
    uint32_t c = Compile(e.args[i], slots);
    nodes_[id].child[i] = c;
  }
  if (e.op == Op::kCompr) {
    std::string key = lang::Encode(e.args[0]).compact();
    auto [it, inserted] = slots.emplace(key, static_cast<uint32_t>(slot_fn_.size()));
    if (inserted) slot_fn_.push_back(nodes_[id].child[0]);
    nodes_[id].slot = it->second;
  }
  return id;
}

int64_t Evaluator::cache_spent() const {
  int64_t total = 0;
  for (const ComprEntry& e : cache_) total += e.meter.spent;
  return total;
}

Status Evaluator::Finish(Op op, CostMeter& meter, const Integer& out) const {
  if (!meter.Charge(CostOf(op, out))) return Status::kTimeout;
  if (!out.is_small()) {
    unsigned bits = out.bit_length();
    if (bits > magnitude_bits_) return Status::kMagnitudeAbort;
    if (bits == magnitude_bits_) {
      Integer mag = out.sign() < 0 ? -out : out;
      if (mag > limits_.max_magnitude) return Status::kMagnitudeAbort;
    }
  }
  return Status::kValue;
}

bool Evaluator::ExtendCompr(uint32_t slot, int64_t index) {
  ComprEntry& entry = cache_[slot];
  const uint32_t fn = slot_fn_[slot];
  static const Integer kZero(0);
  while (!entry.closed && static_cast<int64_t>(entry.values.size()) <= index) {
    int64_t k = static_cast<int64_t>(entry.values.size());
    if (k >= limits_.n_compr) {
      entry.closed = true;
      entry.stop = Status::kComprLimit;
      break;
    }
    entry.meter.budget = (k + 1) * limits_.t_call;
    Integer r;
    Status st = EvalNode(fn, entry.next_candidate, kZero, entry.meter, r);
    if (st != Status::kValue) {
      entry.closed = true;
      entry.stop = st;
      break;
    }
    if (r.is_nonpositive()) entry.values.push_back(entry.next_candidate);
    entry.next_candidate = entry.next_candidate + Integer(1);
  }
  return static_cast<int64_t>(entry.values.size()) > index;
}

Status Evaluator::EvalNode(uint32_t n, const Integer& x, const Integer& y,
                           CostMeter& meter, Integer& out) {
  const Node& node = nodes_[n];
  Status st;
  switch (node.op) {
    case Op::kZero:
      out = Integer(0);
      break;
    case Op::kOne:
      out = Integer(1);
      break;
    case Op::kTwo:
      out = Integer(2);
      break;
    case Op::kX:
      out = x;
      break;
    case Op::kY:
      out = y;
      break;
    case Op::kPlus:
    case Op::kMinus:
    case Op::kTimes:
    case Op::kDiv:
    case Op::kMod: {
      Integer a, b;
      if ((st = EvalNode(node.child[0], x, y, meter, a)) != Status::kValue) return st;
      if ((st = EvalNode(node.child[1], x, y, meter, b)) != Status::kValue) return st;
      switch (node.op) {
        case Op::kPlus:
          out = a + b;
          break;
        case Op::kMinus:
          out = a - b;
          break;
        case Op::kTimes:
          out = a * b;
          break;
        default:
          if (b.sign() == 0) return Status::kDivByZero;
          out = node.op == Op::kDiv ? Integer::DivTrunc(a, b) : Integer::ModTrunc(a, b);
      }
      break;
    }
    case Op::kCond: {
      Integer c;
      if ((st = EvalNode(node.child[0], x, y, meter, c)) != Status::kValue) return st;
      uint32_t branch = c.is_nonpositive() ? node.child[1] : node.child[2];
      if ((st = EvalNode(branch, x, y, meter, out)) != Status::kValue) return st;
      break;
    }
    case Op::kLoop: {
      Integer b, a;
      if ((st = EvalNode(node.child[2], x, y, meter, b)) != Status::kValue) return st;
      if ((st = EvalNode(node.child[1], x, y, meter, a)) != Status::kValue) return st;
      Integer acc = std::move(b);
      if (a.sign() > 0) {
        // A bound beyond int64 can never be reached within any budget.
        const int64_t last = a.to_int64().value_or(std::numeric_limits<int64_t>::max());
        for (int64_t i = 1; i <= last; ++i) {
          Integer next;
          if ((st = EvalNode(node.child[0], acc, Integer(i), meter, next)) != Status::kValue) {
            return st;
          }
          acc = std::move(next);
        }
      }
      out = std::move(acc);
      break;
    }
    case Op::kLoop2: {
      Integer b, c, a;
      if ((st = EvalNode(node.child[3], x, y, meter, b)) != Status::kValue) return st;
      if ((st = EvalNode(node.child[4], x, y, meter, c)) != Status::kValue) return st;
      if ((st = EvalNode(node.child[2], x, y, meter, a)) != Status::kValue) return st;
      if (a.sign() > 0) {
        const int64_t last = a.to_int64().value_or(std::numeric_limits<int64_t>::max());
        for (int64_t i = 1; i <= last; ++i) {
          Integer nb, nc;
          if ((st = EvalNode(node.child[0], b, c, meter, nb)) != Status::kValue) return st;
          if ((st = EvalNode(node.child[1], b, c, meter, nc)) != Status::kValue) return st;
          b = std::move(nb);
          c = std::move(nc);
        }
      }
      out = std::move(b);
      break;
    }
    case Op::kCompr: {
      Integer a;
      if ((st = EvalNode(node.child[1], x, y, meter, a)) != Status::kValue) return st;
      if (a.sign() < 0) return Status::kComprFailure;
      auto idx = a.to_int64();
      if (!idx || *idx >= limits_.n_compr) return Status::kComprLimit;
      if (!ExtendCompr(node.slot, *idx)) return Status::kComprLimit;
      out = cache_[node.slot].values[static_cast<size_t>(*idx)];
      break;
    }
  }
  return Finish(node.op, meter, out);
}

EvalOutcome Evaluator::Eval(const Integer& x, const Integer& y, CostMeter& meter) {
  EvalOutcome result;
  result.status = EvalNode(0, x, y, meter, result.value);
  result.spent = meter.spent;
  return result;
}

EvalOutcome EvalExpr(const lang::Expr& e, const Integer& x, const Integer& y,
                     const EvalLimits& limits) {
  Evaluator ev(e, limits);
  CostMeter meter{0, limits.t_call};
  return ev.Eval(x, y, meter);
}

ComprEntry PrecomputeCompr(const lang::Expr& f, const EvalLimits& limits) {
  // compr(f, 0) compiles f into slot 0.
  Evaluator ev(lang::build::Compr(f, lang::build::Zero()), limits);
  ev.ExtendCompr(0, limits.n_compr);
  return ev.cache()[0];
}

RunResult RunSequenceProgram(Evaluator& evaluator,
                             const std::function<bool(const TermInfo&)>& consumer) {
  RunResult result;
  CostMeter meter;
  static const Integer kZero(0);
  const int64_t t_call = evaluator.limits().t_call;
  for (int64_t n = 0;; ++n) {
    meter.budget = (n + 1) * t_call;
    EvalOutcome out = evaluator.Eval(Integer(n), kZero, meter);
    result.total_cost = meter.spent + evaluator.cache_spent();
    if (!out.ok()) {
      result.final = std::move(out);
      return result;
    }
    ++result.terms;
    bool more = consumer(TermInfo{n, out.value, result.total_cost, meter.spent});
    if (!more) {
      result.final = std::move(out);
      result.stopped_by_consumer = true;
      return result;
    }
  }
}

RunResult RunSequenceProgram(const lang::Expr& e, const EvalLimits& limits,
                             const std::function<bool(const TermInfo&)>& consumer) {
  Evaluator ev(e, limits);
  return RunSequenceProgram(ev, consumer);
}

RunResult FirstTerms(const lang::Expr& e, const EvalLimits& limits, int64_t n,
                     std::vector<Integer>& out) {
  out.clear();
  if (n <= 0) return {};
  return RunSequenceProgram(e, limits, [&](const TermInfo& t) {
    out.push_back(t.value);
    return static_cast<int64_t>(out.size()) < n;
  });
}

}  // namespace seqsynth::eval
