#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "qac/errors.hpp"

namespace qac {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational weight type for the oracle-grade arithmetic mode.
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const Rat& x) { return x.template convert_to<double>(); }
inline double to_double(const BigInt& x) { return x.template convert_to<double>(); }

// A scalar extended with a single saturating +infinity. Addition saturates,
// comparisons treat infinity as maximal. Used for penalty values, where a
// length limit maps exceeded lengths to an infinite cost.
template <class T>
class Extended {
 public:
  Extended() = default;
  Extended(T v) : value_(std::move(v)) {}  // NOLINT: implicit by design

  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  // Finite value accessor; throws on infinity so a silent garbage read is
  // impossible.
  const T& finite() const {
    if (infinite_) throw DomainError("attempt to read an infinite value as finite");
    return value_;
  }

  Extended operator+(const Extended& o) const {
    if (infinite_ || o.infinite_) return infinity();
    return Extended(value_ + o.value_);
  }
  Extended& operator+=(const Extended& o) {
    *this = *this + o;
    return *this;
  }
  // Difference of two finite values; f(l) - f(l-1) with exactly one side
  // infinite yields infinity, both infinite is meaningless.
  Extended operator-(const Extended& o) const {
    if (o.infinite_) throw DomainError("difference with an infinite subtrahend");
    if (infinite_) return infinity();
    return Extended(value_ - o.value_);
  }

  bool operator==(const Extended& o) const {
    if (infinite_ != o.infinite_) return false;
    return infinite_ || value_ == o.value_;
  }
  bool operator!=(const Extended& o) const { return !(*this == o); }
  bool operator<(const Extended& o) const {
    if (infinite_) return false;
    if (o.infinite_) return true;
    return value_ < o.value_;
  }
  bool operator<=(const Extended& o) const { return *this < o || *this == o; }
  bool operator>(const Extended& o) const { return o < *this; }
  bool operator>=(const Extended& o) const { return o <= *this; }

  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : to_double(value_);
  }

 private:
  T value_{};
  bool infinite_ = false;
};

// Decimal digit-string to integer. The cpp_int string constructor follows C
// prefix rules (leading 0 is octal), so digit runs with leading zeros must
// not reach it directly.
inline BigInt parse_bigint_decimal(std::string s, const std::string& what) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) throw InvalidParameterError(what + " is empty");
  for (char c : s)
    if (c < '0' || c > '9')
      throw InvalidParameterError(what + " is not an integer: '" + s + "'");
  auto first = s.find_first_not_of('0');
  if (first == std::string::npos) return BigInt(0);
  BigInt v(s.substr(first));
  return neg ? BigInt(-v) : v;
}

inline int ceil_log2(long n) {
  if (n <= 0) throw InvalidParameterError("ceil_log2 expects a positive argument");
  int k = 0;
  long v = 1;
  while (v < n) {
    v <<= 1;
    ++k;
  }
  return k;
}

}  // namespace qac
