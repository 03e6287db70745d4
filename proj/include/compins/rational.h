// Copyright 2026 The Compins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COMPINS_RATIONAL_H_
#define COMPINS_RATIONAL_H_

#include <cstdint>
#include <numeric>
#include <string>

#include "compins/errors.h"

namespace compins {

// Exact rational value over int64 with __int128 intermediates. All quantile
// and shrinkage arithmetic in the pipeline is exact; doubles appear only at
// presentation boundaries.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t integer) : num_(integer), den_(1) {}  // NOLINT

  static Rational Of(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    return Rational(g == 0 ? 0 : num / g, g == 0 ? 1 : den / g);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool IsInteger() const { return den_ == 1; }
  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Decimal rendering, exact when the denominator divides a power of ten,
  // otherwise rounded to `max_places`.
  std::string ToDecimalString(int max_places = 6) const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return FromWide(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return FromWide(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return FromWide(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return FromWide(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  using Wide = __int128;

  constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {}

  static Rational FromWide(Wide num, Wide den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Wide a = num < 0 ? -num : num;
    Wide b = den;
    while (b != 0) {
      Wide t = a % b;
      a = b;
      b = t;
    }
    if (a != 0) {
      num /= a;
      den /= a;
    } else {
      den = 1;
    }
    const Wide kMax = static_cast<Wide>(INT64_MAX);
    const Wide kMin = static_cast<Wide>(INT64_MIN);
    if (num > kMax || num < kMin || den > kMax) throw Error("rational overflow");
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rational Max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational Min(const Rational& a, const Rational& b) { return b < a ? b : a; }

inline std::string Rational::ToDecimalString(int max_places) const {
  const bool negative = num_ < 0;
  std::int64_t mag = negative ? -num_ : num_;
  std::int64_t whole = mag / den_;
  std::int64_t rem = mag % den_;
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (rem == 0) return out;
  out.push_back('.');
  for (int i = 0; i < max_places && rem != 0; ++i) {
    rem *= 10;
    out.push_back(static_cast<char>('0' + rem / den_));
    rem %= den_;
  }
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

}  // namespace compins

#endif  // COMPINS_RATIONAL_H_
