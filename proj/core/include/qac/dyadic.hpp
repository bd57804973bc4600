#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "qac/errors.hpp"
#include "qac/numeric.hpp"

namespace qac {

// Exact dyadic rational m * 2^e, normalized so that m is odd (or zero with
// e = 0). All width bookkeeping runs on this type; no rounding ever occurs.
class Dyadic {
 public:
  Dyadic() = default;
  explicit Dyadic(long v) : mant_(v) { normalize(); }
  explicit Dyadic(BigInt v) : mant_(std::move(v)) { normalize(); }
  Dyadic(BigInt mantissa, int exponent) : mant_(std::move(mantissa)), exp_(exponent) {
    normalize();
  }

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1); }
  // 2^e for any integer e, including negative.
  static Dyadic pow2(int e) { return Dyadic(BigInt(1), e); }

  bool is_zero() const { return mant_.is_zero(); }
  bool is_negative() const { return mant_ < 0; }
  bool is_power_of_two() const { return mant_ == 1; }
  bool is_integer() const { return is_zero() || exp_ >= 0; }

  const BigInt& mantissa() const { return mant_; }
  int exponent() const { return exp_; }

  // Exponent of the least significant set bit; for a normalized nonzero
  // value this is exactly exp_.
  int lowbit_exponent() const {
    if (is_zero()) throw DomainError("lowbit of zero");
    return exp_;
  }

  // True when the binary expansion has a set bit at 2^e.
  bool bit_at(int e) const {
    if (is_zero() || e < exp_) return false;
    return boost::multiprecision::bit_test(mant_, static_cast<unsigned>(e - exp_));
  }

  // Splits the value as odd * 2^k; the odd factor of zero is undefined.
  std::pair<BigInt, Dyadic> decompose() const {
    if (is_zero()) throw DomainError("cannot decompose a zero total width");
    return {mant_, pow2(exp_)};
  }

  Dyadic operator+(const Dyadic& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    int e = exp_ < o.exp_ ? exp_ : o.exp_;
    BigInt m = (mant_ << static_cast<unsigned>(exp_ - e)) +
               (o.mant_ << static_cast<unsigned>(o.exp_ - e));
    return Dyadic(std::move(m), e);
  }
  Dyadic operator-(const Dyadic& o) const { return *this + o.negated(); }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  Dyadic operator*(const BigInt& k) const {
    if (k.is_zero()) return Dyadic();
    return Dyadic(mant_ * k, exp_);
  }
  Dyadic negated() const {
    Dyadic d = *this;
    d.mant_ = -d.mant_;
    return d;
  }

  bool operator==(const Dyadic& o) const { return mant_ == o.mant_ && exp_ == o.exp_; }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }
  bool operator<(const Dyadic& o) const { return (*this - o).is_negative(); }
  bool operator<=(const Dyadic& o) const { return !(o < *this); }
  bool operator>(const Dyadic& o) const { return o < *this; }
  bool operator>=(const Dyadic& o) const { return !(*this < o); }

  double as_double() const { return std::ldexp(to_double(mant_), exp_); }

  // Exact decimal rendering; dyadic rationals always terminate in decimal.
  std::string to_string() const {
    if (is_zero()) return "0";
    BigInt m = mant_;
    bool neg = m < 0;
    if (neg) m = -m;
    std::string out;
    if (exp_ >= 0) {
      out = BigInt(m << static_cast<unsigned>(exp_)).str();
    } else {
      unsigned k = static_cast<unsigned>(-exp_);
      BigInt scale = boost::multiprecision::pow(BigInt(5), k);
      BigInt digits = m * scale;  // value = digits / 10^k
      std::string s = digits.str();
      if (s.size() <= k) s.insert(0, k + 1 - s.size(), '0');
      s.insert(s.size() - k, ".");
      out = s;
    }
    return neg ? "-" + out : out;
  }

 private:
  void normalize() {
    if (mant_.is_zero()) {
      exp_ = 0;
      return;
    }
    unsigned shift = boost::multiprecision::lsb(boost::multiprecision::abs(mant_));
    if (shift > 0) {
      mant_ >>= shift;
      exp_ += static_cast<int>(shift);
    }
  }

  BigInt mant_ = 0;
  int exp_ = 0;
};

// Parses an exact dyadic value from text. Accepted forms: integers ("3"),
// terminating decimals whose reduced denominator is a power of two
// ("1.5", "0.375"), and fractions "p/q" with q a power of two ("3/8").
inline Dyadic parse_dyadic(const std::string& text) {
  auto fail = [&]() -> Dyadic {
    throw InvalidParameterError("not an exact dyadic rational: '" + text + "'");
  };
  if (text.empty()) return fail();
  std::string s = text;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) return fail();
  auto all_digits = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  Dyadic result;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    BigInt p = parse_bigint_decimal(num, "numerator");
    BigInt q = parse_bigint_decimal(den, "denominator");
    if (q.is_zero()) return fail();
    unsigned k = boost::multiprecision::lsb(q);
    if ((q >> k) != 1) return fail();  // denominator must be 2^k
    result = Dyadic(p, -static_cast<int>(k));
  } else if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) return fail();
    BigInt digits = parse_bigint_decimal(ip + fp, "digits");
    unsigned k = static_cast<unsigned>(fp.size());
    // value = digits / 10^k; dyadic iff digits divisible by 5^k.
    BigInt five = boost::multiprecision::pow(BigInt(5), k);
    if (BigInt(digits % five) != 0) return fail();
    result = Dyadic(digits / five, -static_cast<int>(k));
  } else {
    if (!all_digits(s)) return fail();
    result = Dyadic(parse_bigint_decimal(s, "integer"), 0);
  }
  return neg ? result.negated() : result;
}

}  // namespace qac
