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

#ifndef SEQSYNTH_INTEGER_HPP_
#define SEQSYNTH_INTEGER_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace seqsynth {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision signed integer with an int64 fast path.
//
// Values that fit in int64 are stored inline; anything wider lives in an
// immutable, shared cpp_int so copies stay cheap inside evaluation loops.
// The representation is normalized: big_ is set iff the value does not fit
// in int64, so equality on the small path is a plain compare.
class Integer {
 public:
  Integer() = default;
  Integer(int64_t v) : small_(v) {}  // NOLINT(runtime/explicit)
  explicit Integer(const BigInt& v);

  // Parses an optional '-' followed by decimal digits. Throws
  // std::invalid_argument on anything else.
  static Integer Parse(std::string_view text);
  static Integer Pow2(unsigned exponent);

  bool is_small() const { return !big_; }
  int64_t small_value() const { return small_; }
  std::optional<int64_t> to_int64() const {
    if (big_) return std::nullopt;
    return small_;
  }
  BigInt to_big() const;

  int sign() const;
  bool is_nonpositive() const { return sign() <= 0; }

  // Number of bits in |value|; 0 for zero.
  unsigned bit_length() const;

  std::string to_string() const;
  size_t hash() const;

  friend Integer operator+(const Integer& a, const Integer& b);
  friend Integer operator-(const Integer& a, const Integer& b);
  friend Integer operator*(const Integer& a, const Integer& b);
  Integer operator-() const { return Integer(0) - *this; }

  // Truncating division and remainder (C semantics): the quotient rounds
  // toward zero and the remainder takes the dividend's sign. The divisor
  // must be nonzero.
  static Integer DivTrunc(const Integer& a, const Integer& b);
  static Integer ModTrunc(const Integer& a, const Integer& b);

  friend bool operator==(const Integer& a, const Integer& b);
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

  friend std::ostream& operator<<(std::ostream& os, const Integer& v) {
    return os << v.to_string();
  }

 private:
  static Integer FromBig(BigInt v);

  int64_t small_ = 0;
  std::shared_ptr<const BigInt> big_;
};

struct IntegerHash {
  size_t operator()(const Integer& v) const { return v.hash(); }
};

}  // namespace seqsynth

#endif  // SEQSYNTH_INTEGER_HPP_
