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

#include "seqsynth/integer.hpp"

#include <bit>
#include <functional>
#include <limits>
#include <stdexcept>

namespace seqsynth {

namespace {

constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

uint64_t MagnitudeOf(int64_t v) {
  return v < 0 ? uint64_t{0} - static_cast<uint64_t>(v)
               : static_cast<uint64_t>(v);
}

}  // namespace

Integer::Integer(const BigInt& v) { *this = FromBig(v); }

Integer Integer::FromBig(BigInt v) {
  if (v >= kMin && v <= kMax) return Integer(static_cast<int64_t>(v));
  Integer out;
  out.big_ = std::make_shared<const BigInt>(std::move(v));
  return out;
}

Integer Integer::Parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer");
  size_t i = 0;
  bool negative = false;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("missing digits");
  for (size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw std::invalid_argument("invalid integer: " + std::string(text));
    }
  }
  if (text.size() - i <= 18) {
    int64_t v = 0;
    for (size_t j = i; j < text.size(); ++j) v = v * 10 + (text[j] - '0');
    return Integer(negative ? -v : v);
  }
  BigInt v(std::string(text.substr(i)));
  if (negative) v = -v;
  return FromBig(std::move(v));
}

Integer Integer::Pow2(unsigned exponent) {
  if (exponent < 63) return Integer(int64_t{1} << exponent);
  BigInt v = 1;
  v <<= exponent;
  return FromBig(std::move(v));
}

BigInt Integer::to_big() const {
  if (big_) return *big_;
  return BigInt(small_);
}

int Integer::sign() const {
  if (big_) return big_->sign();
  return (small_ > 0) - (small_ < 0);
}

unsigned Integer::bit_length() const {
  if (big_) {
    if (big_->is_zero()) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(abs(*big_))) + 1;
  }
  uint64_t m = MagnitudeOf(small_);
  return static_cast<unsigned>(std::bit_width(m));
}

std::string Integer::to_string() const {
  if (big_) return big_->str();
  return std::to_string(small_);
}

size_t Integer::hash() const {
  if (!big_) return std::hash<int64_t>{}(small_);
  size_t h = 0x9e3779b97f4a7c15ull;
  for (auto limb = big_->backend().limbs(),
            end = limb + big_->backend().size();
       limb != end; ++limb) {
    h ^= std::hash<uint64_t>{}(*limb) + 0x9e3779b97f4a7c15ull + (h << 6) +
         (h >> 2);
  }
  return h ^ static_cast<size_t>(big_->sign() < 0);
}

Integer operator+(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    int64_t r;
    if (!__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(r);
  }
  return Integer::FromBig(a.to_big() + b.to_big());
}

Integer operator-(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    int64_t r;
    if (!__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(r);
  }
  return Integer::FromBig(a.to_big() - b.to_big());
}

Integer operator*(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    int64_t r;
    if (!__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(r);
  }
  return Integer::FromBig(a.to_big() * b.to_big());
}

Integer Integer::DivTrunc(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
    return Integer(a.small_ / b.small_);
  }
  // cpp_int division truncates toward zero.
  return FromBig(a.to_big() / b.to_big());
}

Integer Integer::ModTrunc(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    if (b.small_ == -1) return Integer(0);
    return Integer(a.small_ % b.small_);
  }
  return FromBig(a.to_big() % b.to_big());
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // normalized: a big value never equals a small one
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = a.to_big().compare(b.to_big());
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace seqsynth
