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

#include <random>

#include <gtest/gtest.h>

#include "seqsynth/symbolic.hpp"
#include "support/oracles.hpp"

namespace seqsynth::eval {
namespace {

using lang::Decode;
using lang::Expr;
using lang::TokenString;
using namespace lang::build;

Expr P(const char* tokens) { return Decode(TokenString::Parse(tokens)); }

std::vector<Integer> Terms(const Expr& e, int n, EvalLimits limits = EvalLimits::Slow()) {
  std::vector<Integer> out;
  FirstTerms(e, limits, n, out);
  return out;
}

TEST(EvalTest, SemanticsMatchClosedForms) {
  EXPECT_EQ(Terms(P("J B K F L K"), 30), oracle::Factorials(30));
  EXPECT_EQ(Terms(Loop(Plus(X(), X()), X(), One()), 30), oracle::PowersOfTwo(30));
  EXPECT_EQ(Terms(P("N B A K K D L K"), 30), oracle::Fibonacci(30));
  // 3^x as loop(x * (2 + 1), x, 1)
  std::vector<Integer> pow3;
  for (int i = 0; i < 30; ++i) pow3.push_back(oracle::Power(3, i));
  EXPECT_EQ(Terms(Loop(Times(X(), Plus(Two(), One())), X(), One()), 30), pow3);
}

TEST(EvalTest, ConstantProgram) {
  Expr ten = P("D F C D C C C");
  for (int x : {0, 1, 7, 1000}) {
    for (int y : {0, -3, 9}) {
      EvalOutcome out = EvalExpr(ten, x, y, EvalLimits::Fast());
      ASSERT_TRUE(out.ok());
      EXPECT_EQ(out.value, Integer(10));
    }
  }
  EXPECT_EQ(Terms(ten, 5), std::vector<Integer>(5, Integer(10)));
}

TEST(EvalTest, DivModTruncateAndChargeFive) {
  EvalOutcome q = EvalExpr(Div(Minus(Zero(), Plus(Two(), Plus(Two(), Two()))), Two() /*-6/2*/),
                           0, 0, EvalLimits::Fast());
  EXPECT_EQ(q.value, Integer(-3));
  EvalOutcome r = EvalExpr(Mod(Minus(Zero(), X()), Two()), 7, 0, EvalLimits::Fast());
  EXPECT_EQ(r.value, Integer(-1));
  // div(2, 2): two constants at 1 each plus the division at 5
  EXPECT_EQ(EvalExpr(Div(Two(), Two()), 0, 0, EvalLimits::Fast()).spent, 7);
  EXPECT_EQ(EvalExpr(Mod(Two(), Two()), 0, 0, EvalLimits::Fast()).spent, 7);
  EXPECT_EQ(EvalExpr(Plus(Two(), Two()), 0, 0, EvalLimits::Fast()).spent, 3);
}

TEST(EvalTest, BigResultsCostTheirBitLength) {
  Integer p100 = Integer::Pow2(100);
  EXPECT_EQ(CostOf(lang::Op::kTimes, p100 * p100), 201);
  EXPECT_EQ(CostOf(lang::Op::kDiv, p100), 101);
  EXPECT_EQ(CostOf(lang::Op::kDiv, Integer(12)), 5);
  EXPECT_EQ(CostOf(lang::Op::kX, Integer(INT64_MAX)), 1);
  // x * x with x = 2^100: two variable reads at 101 each plus the product.
  EvalOutcome out = EvalExpr(Times(X(), X()), p100, 0, EvalLimits::Fast());
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.spent, 101 + 101 + 201);
}

TEST(EvalTest, FactorialTimeoutMatchesCostOracle) {
  const EvalLimits fast = EvalLimits::Fast();
  std::vector<int64_t> cumulative = oracle::FactorialCumulativeCost(200);
  int64_t expected_fail = -1;
  for (int64_t n = 0; n < 200; ++n) {
    if (cumulative[n] > (n + 1) * fast.t_call) {
      expected_fail = n;
      break;
    }
  }
  ASSERT_GT(expected_fail, 0);
  std::vector<int64_t> seen;
  RunResult run = RunSequenceProgram(P("J B K F L K"), fast, [&](const TermInfo& t) {
    seen.push_back(t.total_cost);
    return true;
  });
  EXPECT_EQ(run.final.status, Status::kTimeout);
  EXPECT_EQ(run.terms, expected_fail);
  for (size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], cumulative[i]) << i;
  EXPECT_GT(run.total_cost, (expected_fail + 1) * fast.t_call);
}

TEST(EvalTest, MagnitudeBound) {
  // loop(x * x, x, 2) = 2^(2^x); 2^1024 exceeds 10^285 while 2^512 does not.
  RunResult run = RunSequenceProgram(Loop(Times(X(), X()), X(), Two()), EvalLimits::Fast(),
                                     [](const TermInfo&) { return true; });
  EXPECT_EQ(run.final.status, Status::kMagnitudeAbort);
  EXPECT_EQ(run.terms, 10);
  // The bound itself is allowed, one more is not.
  Integer bound = EvalLimits::DefaultMaxMagnitude();
  const EvalLimits slow = EvalLimits::Slow();
  EXPECT_TRUE(EvalExpr(X(), bound, 0, slow).ok());
  EXPECT_TRUE(EvalExpr(Minus(Zero(), X()), bound, 0, slow).ok());
  EXPECT_EQ(EvalExpr(Plus(X(), One()), bound, 0, slow).status, Status::kMagnitudeAbort);
  EXPECT_EQ(EvalExpr(Minus(Zero(), Plus(X(), One())), bound, 0, slow).status,
            Status::kMagnitudeAbort);
}

TEST(EvalTest, ConditionalIsLazy) {
  Expr e = Cond(X(), One(), Div(One(), Zero()));
  EXPECT_EQ(EvalExpr(e, 0, 0, EvalLimits::Fast()).value, Integer(1));
  EXPECT_EQ(EvalExpr(e, -5, 0, EvalLimits::Fast()).value, Integer(1));
  EXPECT_EQ(EvalExpr(e, 1, 0, EvalLimits::Fast()).status, Status::kDivByZero);
}

TEST(EvalTest, LoopWithNonPositiveBoundReturnsStart) {
  Expr e = Loop(Plus(X(), Two()), Minus(Zero(), X()), Plus(X(), One()));
  EXPECT_EQ(EvalExpr(e, 4, 0, EvalLimits::Fast()).value, Integer(5));
  EXPECT_EQ(EvalExpr(e, 0, 0, EvalLimits::Fast()).value, Integer(1));
}

TEST(EvalTest, Loop2UpdatesSimultaneously) {
  // (x, y) <- (y, x): after an odd number of swaps the first component is c.
  Expr swap = Loop2(Y(), X(), X(), One(), Two());
  EXPECT_EQ(EvalExpr(swap, 3, 0, EvalLimits::Fast()).value, Integer(2));
  EXPECT_EQ(EvalExpr(swap, 4, 0, EvalLimits::Fast()).value, Integer(1));
}

TEST(EvalTest, ComprEnumeratesAndRespectsLimits) {
  // compr(x mod 2, i) = 2i
  Expr evens = Compr(Mod(X(), Two()), X());
  std::vector<Integer> out;
  RunResult run = FirstTerms(evens, EvalLimits::Fast(), 100, out);
  ASSERT_EQ(out.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(out[i], Integer(2 * i));
  EXPECT_EQ(run.final.status, Status::kComprLimit);
  EXPECT_EQ(Terms(evens, 150).size(), 150u);

  Expr neg = Compr(Mod(X(), Two()), Minus(Zero(), One()));
  EXPECT_EQ(EvalExpr(neg, 0, 0, EvalLimits::Fast()).status, Status::kComprFailure);
}

TEST(EvalTest, ComprCacheSharedAcrossStructurallyEqualCalls) {
  Expr f = Mod(X(), Two());
  Evaluator ev(Plus(Compr(f, X()), Compr(f, Plus(X(), One()))), EvalLimits::Fast());
  EXPECT_EQ(ev.num_compr_slots(), 1u);
  Evaluator ev2(Plus(Compr(f, X()), Compr(Mod(X(), Two() /*same*/), One())), EvalLimits::Fast());
  EXPECT_EQ(ev2.num_compr_slots(), 1u);
  Evaluator ev3(Plus(Compr(f, X()), Compr(Mod(X(), Plus(One(), One())), One())),
                EvalLimits::Fast());
  EXPECT_EQ(ev3.num_compr_slots(), 2u);
}

TEST(EvalTest, ComprPrecomputationBudget) {
  // f(m) = loop(x + 1, m^3, 0) - m^3: always 0, cost grows with m^3.
  Expr cube = Times(X(), Times(X(), X()));
  Expr f = Minus(Loop(Plus(X(), One()), cube, Zero()), cube);
  ComprEntry entry = PrecomputeCompr(f, EvalLimits::Fast());
  ASSERT_TRUE(entry.closed);
  EXPECT_EQ(entry.stop, Status::kTimeout);
  // Each successful value k fits in the cumulative (k+1) * t_call.
  ASSERT_FALSE(entry.values.empty());
  for (size_t k = 0; k < entry.values.size(); ++k) EXPECT_EQ(entry.values[k], Integer(k));
  EXPECT_LT(entry.values.size(), 20u);
  ComprEntry full = PrecomputeCompr(Mod(X(), Two()), EvalLimits::Fast());
  EXPECT_EQ(full.values.size(), 20u);
  EXPECT_EQ(full.stop, Status::kComprLimit);
}

TEST(EvalTest, AgreesWithReferenceInterpreter) {
  std::mt19937_64 rng(17);
  int compared = 0;
  for (int i = 0; i < 3000; ++i) {
    Expr e = oracle::RandomExpr(rng, 25);
    Evaluator ev(e, EvalLimits::Fast());
    for (int x = 0; x < 6; ++x) {
      CostMeter meter{0, 1000};
      EvalOutcome out = ev.Eval(x, 0, meter);
      if (!out.ok()) continue;
      oracle::RefResult ref = oracle::RefEval(e, x, 0, 2000000);
      if (!ref.ok) continue;
      ++compared;
      ASSERT_EQ(out.value, Integer(ref.value)) << lang::ToSymbolic(e) << " at x=" << x;
    }
  }
  EXPECT_GT(compared, 5000);
}

TEST(EvalTest, BudgetInvariantAndMonotoneLimits) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1500; ++i) {
    Expr e = oracle::RandomExpr(rng, 30);
    EvalLimits small{300, 5, EvalLimits::DefaultMaxMagnitude()};
    std::vector<Integer> a, b;
    RunResult ra = RunSequenceProgram(e, small, [&](const TermInfo& t) {
      EXPECT_LE(t.spent, (t.index + 1) * small.t_call);
      a.push_back(t.value);
      return a.size() < 40;
    });
    FirstTerms(e, EvalLimits::Fast(), 40, b);
    ASSERT_LE(a.size(), b.size()) << lang::ToSymbolic(e);
    for (size_t k = 0; k < a.size(); ++k) ASSERT_EQ(a[k], b[k]);
    (void)ra;
  }
}

TEST(EvalTest, DeterministicAcrossRuns) {
  Expr e = lang::ParseSymbolic(
      "2 + (compr (loop (x - (if (x mod (1 + y)) <= 0 then 0 else 1)) x x) x)");
  std::vector<Integer> a, b;
  RunResult ra = FirstTerms(e, EvalLimits::Fast(), 50, a);
  RunResult rb = FirstTerms(e, EvalLimits::Fast(), 50, b);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ra.total_cost, rb.total_cost);
  EXPECT_EQ(ra.final.status, rb.final.status);
}

}  // namespace
}  // namespace seqsynth::eval
