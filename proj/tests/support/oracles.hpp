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

// Independent reference implementations used by the tests. Nothing here
// calls into the evaluator, the trie or the checker.

#ifndef SEQSYNTH_TESTS_SUPPORT_ORACLES_HPP_
#define SEQSYNTH_TESTS_SUPPORT_ORACLES_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "seqsynth/integer.hpp"
#include "seqsynth/lang.hpp"
#include "seqsynth/oeis.hpp"

namespace oracle {

using seqsynth::BigInt;
using seqsynth::Integer;

std::vector<Integer> Factorials(int n);
std::vector<Integer> PowersOfTwo(int n);
std::vector<Integer> Fibonacci(int n);
Integer Power(int64_t base, int64_t exponent);
std::vector<Integer> Primes(int n);
std::vector<Integer> Squares(int n);
std::vector<Integer> Cubes(int n);
std::vector<Integer> Triangular(int n);
// Palindromes in base 10, ascending from 0.
std::vector<Integer> Palindromes(int n);
// Central binomial coefficients C(2n, n).
std::vector<Integer> CentralBinomial(int n);
// Double factorials of odd numbers (2n-1)!!, with (-1)!! = 1.
std::vector<Integer> OddDoubleFactorials(int n);

// Pairing along anti-diagonals: 0 -> (0,0), 1 -> (1,0), 2 -> (1,1),
// 3 -> (2,0), ... i.e. n = xa(xa+1)/2 + xb with 0 <= xb <= xa.
std::pair<int64_t, int64_t> TriangleDecode(int64_t n);
int64_t TriangleEncode(int64_t xa, int64_t xb);

// Cumulative abstract time after each term of loop(x*y, x, 1) ("J B K F L K")
// computed from closed-form bit lengths of factorials. Entry n is the total
// spent once term n has been produced.
std::vector<int64_t> FactorialCumulativeCost(int n);

// Straightforward recursive interpreter on BigInt. compr is a direct search
// with no cache; `steps` bounds the total number of node evaluations.
struct RefResult {
  bool ok = false;
  std::string error;  // "steps", "div0", "compr_neg" when !ok
  BigInt value;
};
RefResult RefEval(const seqsynth::lang::Expr& e, const BigInt& x, const BigInt& y,
                  int64_t steps = 200000);

// Uniformly grown random program trees of bounded size (for property tests).
seqsynth::lang::Expr RandomExpr(std::mt19937_64& rng, int max_size);

// Every corpus entry whose stored terms are all matched by `stream`.
std::vector<seqsynth::oeis::ANum> NaiveMatches(const seqsynth::oeis::Corpus& corpus,
                                               const std::vector<Integer>& stream);

// Deterministic OEIS-like corpus: a handful of well-known sequences under
// their real numbers plus generated families (polynomials, linear
// recurrences, products, digit and divisor functions, noise) under numbers
// 900000+. `terms` terms each.
seqsynth::oeis::Corpus SyntheticCorpus(int size, uint64_t seed, int terms = 32);

// Well-known entries included at the start of SyntheticCorpus.
seqsynth::oeis::Corpus KnownSequences(int terms);

// "NAME<TAB>symbolic program" lines, e.g. the prime programs fixture.
std::vector<std::pair<std::string, seqsynth::lang::Expr>> LoadNamedPrograms(const std::string& path);

}  // namespace oracle

#endif  // SEQSYNTH_TESTS_SUPPORT_ORACLES_HPP_
