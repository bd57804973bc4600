#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "qac/analysis.hpp"
#include "qac/cost_function.hpp"
#include "qac/errors.hpp"
#include "qac/numeric.hpp"

namespace qac {

namespace detail {

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_double_token(const std::string& tok, const std::string& what) {
  if (tok.empty()) throw InvalidParameterError(what + " is empty");
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw InvalidParameterError(what + " is not a number: '" + tok + "'");
  return v;
}

inline long parse_int_token(const std::string& tok, const std::string& what) {
  if (tok.empty()) throw InvalidParameterError(what + " is empty");
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size())
    throw InvalidParameterError(what + " is not an integer: '" + tok + "'");
  return v;
}

// Exact rational literal: integer, p/q, or terminating decimal.
inline Rat parse_rat_token(const std::string& tok, const std::string& what) {
  if (tok.empty()) throw InvalidParameterError(what + " is empty");
  try {
    auto slash = tok.find('/');
    if (slash != std::string::npos) {
      BigInt num = parse_bigint_decimal(tok.substr(0, slash), what);
      BigInt den = parse_bigint_decimal(tok.substr(slash + 1), what);
      if (den == 0) throw InvalidParameterError(what + " divides by zero");
      return Rat(num, den);
    }
    auto dot = tok.find('.');
    if (dot != std::string::npos) {
      std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
      std::size_t frac = tok.size() - dot - 1;
      BigInt num = parse_bigint_decimal(digits, what);
      BigInt den = 1;
      for (std::size_t i = 0; i < frac; ++i) den *= 10;
      return Rat(num, den);
    }
    return Rat(parse_bigint_decimal(tok, what));
  } catch (const InvalidParameterError&) {
    throw InvalidParameterError(what + " is not a number: '" + tok + "'");
  }
}

template <class T>
T parse_value_token(const std::string& tok, const std::string& what);

template <>
inline double parse_value_token<double>(const std::string& tok, const std::string& what) {
  auto slash = tok.find('/');
  if (slash != std::string::npos) {
    double num = parse_double_token(tok.substr(0, slash), what);
    double den = parse_double_token(tok.substr(slash + 1), what);
    if (den == 0.0) throw InvalidParameterError(what + " divides by zero");
    return num / den;
  }
  return parse_double_token(tok, what);
}

template <>
inline Rat parse_value_token<Rat>(const std::string& tok, const std::string& what) {
  return parse_rat_token(tok, what);
}

class ParamBag {
 public:
  ParamBag(const std::string& spec, const std::string& params) : spec_(spec) {
    if (params.empty()) return;
    for (const auto& kv : split_list(params, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        throw InvalidParameterError("penalty '" + spec_ + "': expected key=value, got '" + kv +
                                    "'");
      auto [it, fresh] = bag_.emplace(kv.substr(0, eq), kv.substr(eq + 1));
      if (!fresh)
        throw InvalidParameterError("penalty '" + spec_ + "': duplicate key '" + it->first + "'");
    }
  }

  std::string take(const std::string& key) {
    auto it = bag_.find(key);
    if (it == bag_.end())
      throw InvalidParameterError("penalty '" + spec_ + "': missing parameter '" + key + "'");
    std::string v = it->second;
    bag_.erase(it);
    return v;
  }

  std::string take_or(const std::string& key, const std::string& fallback) {
    auto it = bag_.find(key);
    if (it == bag_.end()) return fallback;
    std::string v = it->second;
    bag_.erase(it);
    return v;
  }

  void expect_empty() const {
    if (!bag_.empty())
      throw InvalidParameterError("penalty '" + spec_ + "': unknown parameter '" +
                                  bag_.begin()->first + "'");
  }

 private:
  std::string spec_;
  std::map<std::string, std::string> bag_;
};

}  // namespace detail

// Penalty grammar used by the command line:
//   linear
//   exp:t=T              minimize sum p 2^(t l), T > 0
//   moment:a=A           minimize sum p l^A, A >= 1
//   quad:alpha=A,beta=B  minimize sum p (A l + B l^2)
//   limit:lmax=K         linear cost, lengths capped at K
//   explimit:t=T,lmax=K  exponential cost, lengths capped at K
//   custom:NAME          registered companion (cubic11, sqrt)
// Exact (rational) arithmetic supports the subset whose parameters are exact:
// integer t and a, rational alpha/beta, and the capped variants.
template <class T>
CostFunction<T> parse_penalty(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  if (name == "custom") {
    std::string which = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if constexpr (std::is_same_v<T, double>) {
      if (auto f = named_phi(which)) return *f;
      throw InvalidParameterError("unknown companion '" + which +
                                  "' (available: cubic11, sqrt)");
    } else {
      throw UnsupportedPenaltyError("custom companions evaluate in floating point only");
    }
  }
  detail::ParamBag params(spec, colon == std::string::npos ? "" : spec.substr(colon + 1));

  if (name == "linear") {
    params.expect_empty();
    return CostFunction<T>::linear();
  }
  if (name == "exp") {
    double t = detail::parse_double_token(params.take("t"), "rate t");
    params.expect_empty();
    return CostFunction<T>::exponential(t);
  }
  if (name == "moment") {
    double a = detail::parse_double_token(params.take("a"), "order a");
    params.expect_empty();
    return CostFunction<T>::moment(a);
  }
  if (name == "quad") {
    T alpha = detail::parse_value_token<T>(params.take_or("alpha", "0"), "alpha");
    T beta = detail::parse_value_token<T>(params.take_or("beta", "0"), "beta");
    params.expect_empty();
    return CostFunction<T>::quadratic(alpha, beta);
  }
  if (name == "limit") {
    long lmax = detail::parse_int_token(params.take("lmax"), "lmax");
    params.expect_empty();
    if (lmax < 1 || lmax > 1'000'000) throw InvalidParameterError("lmax must be in [1, 1e6]");
    return CostFunction<T>::length_limited(CostFunction<T>::linear(), static_cast<int>(lmax));
  }
  if (name == "explimit") {
    double t = detail::parse_double_token(params.take("t"), "rate t");
    long lmax = detail::parse_int_token(params.take("lmax"), "lmax");
    params.expect_empty();
    if (lmax < 1 || lmax > 1'000'000) throw InvalidParameterError("lmax must be in [1, 1e6]");
    return CostFunction<T>::length_limited(CostFunction<T>::exponential(t),
                                           static_cast<int>(lmax));
  }
  throw InvalidParameterError(
      "unknown penalty '" + name +
      "' (available: linear, exp, moment, quad, limit, explimit, custom)");
}

}  // namespace qac
