#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qac/errors.hpp"
#include "qac/numeric.hpp"

namespace qac {

enum class PenaltyKind { linear, exponential, moment, quadratic, length_limited, custom };

namespace detail {

inline std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline bool integral(double v) { return std::floor(v) == v; }

template <class T>
T int_pow(T base, long e) {
  T r(1);
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Per-length, per-weight cost f(l, p), nondecreasing in l, with the flags the
// coding engines key off. Value-semantic and immutable. The scalar T is
// double for everyday use or Rat for the exact arithmetic mode; Rat rejects
// parameters whose evaluation would be irrational.
template <class T>
class CostFunction {
 public:
  using Value = Extended<T>;
  using Fn = std::function<Value(int, const T&)>;
  using RealFn = std::function<double(double)>;

  static CostFunction linear() {
    CostFunction f(PenaltyKind::linear);
    f.convex_ = true;
    f.diff_monotone_ = true;
    f.quasiarithmetic_ = true;
    f.subtranslatory_builtin_ = true;
    return f;
  }

  // f(l, p) = p * 2^(t l), t > 0. Exact mode requires integer t.
  static CostFunction exponential(double t) {
    if (!(t > 0)) throw InvalidParameterError("exponential penalty requires t > 0");
    CostFunction f(PenaltyKind::exponential);
    f.t_ = t;
    if constexpr (!std::is_same_v<T, double>) {
      if (!detail::integral(t))
        throw InvalidParameterError("exact mode requires an integer exponential rate");
      f.t_int_ = static_cast<long>(t);
    }
    f.convex_ = true;
    f.diff_monotone_ = true;
    f.quasiarithmetic_ = true;
    f.subtranslatory_builtin_ = true;
    return f;
  }

  // f(l, p) = p * l^a, a >= 1. Exact mode requires integer a.
  static CostFunction moment(double a) {
    if (!(a >= 1)) throw InvalidParameterError("moment penalty requires a >= 1");
    CostFunction f(PenaltyKind::moment);
    f.a_ = a;
    if constexpr (!std::is_same_v<T, double>) {
      if (!detail::integral(a))
        throw InvalidParameterError("exact mode requires an integer moment order");
      f.a_int_ = static_cast<long>(a);
    }
    f.convex_ = true;
    f.diff_monotone_ = true;
    f.quasiarithmetic_ = true;
    f.subtranslatory_builtin_ = true;
    return f;
  }

  // f(l, p) = p * (alpha l + beta l^2), alpha, beta >= 0, not both zero.
  static CostFunction quadratic(T alpha, T beta) {
    if (alpha < T(0) || beta < T(0))
      throw InvalidParameterError("quadratic penalty requires alpha, beta >= 0");
    if (alpha == T(0) && beta == T(0))
      throw InvalidParameterError("quadratic penalty must not be identically zero");
    CostFunction f(PenaltyKind::quadratic);
    f.alpha_ = alpha;
    f.beta_ = beta;
    f.convex_ = true;
    f.diff_monotone_ = true;
    f.quasiarithmetic_ = true;
    f.subtranslatory_builtin_ = true;
    return f;
  }

  // Same as base below the limit; infinite cost beyond it.
  static CostFunction length_limited(CostFunction base, int l_max) {
    if (l_max < 1) throw InvalidParameterError("length limit must be at least 1");
    CostFunction f(PenaltyKind::length_limited);
    f.convex_ = base.convex_;
    f.diff_monotone_ = base.diff_monotone_;
    f.quasiarithmetic_ = false;
    f.subtranslatory_builtin_ = false;
    f.limit_ = base.limit_ ? std::min(*base.limit_, l_max) : l_max;
    f.base_ = std::make_shared<CostFunction>(std::move(base));
    return f;
  }

  // Arbitrary cost with caller-declared flags; flags are taken on faith and
  // can be spot-checked with probe_properties.
  static CostFunction custom(std::string name, Fn fn, bool convex_in_l,
                             bool differentially_monotone) {
    CostFunction f(PenaltyKind::custom);
    f.custom_name_ = std::move(name);
    f.custom_fn_ = std::move(fn);
    f.convex_ = convex_in_l;
    f.diff_monotone_ = differentially_monotone;
    return f;
  }

  // Cost of the form f(l, p) = p * phi(l) for a strictly increasing phi given
  // as a real function; derivative and inverse default to numeric fallbacks.
  static CostFunction custom_quasiarithmetic(std::string name, RealFn phi, bool convex_in_l,
                                             RealFn phi_prime = nullptr,
                                             RealFn phi_inverse = nullptr)
    requires std::is_same_v<T, double>
  {
    CostFunction f(PenaltyKind::custom);
    f.custom_name_ = std::move(name);
    RealFn phi_copy = phi;
    f.custom_fn_ = [phi_copy](int l, const double& p) -> Value {
      return Value(p * phi_copy(static_cast<double>(l)));
    };
    f.convex_ = convex_in_l;
    f.diff_monotone_ = true;  // p * phi(l) with phi strictly increasing
    f.quasiarithmetic_ = true;
    f.custom_phi_ = std::move(phi);
    f.custom_phi_prime_ = std::move(phi_prime);
    f.custom_phi_inverse_ = std::move(phi_inverse);
    return f;
  }

  PenaltyKind kind() const { return kind_; }
  bool convex_in_length() const { return convex_; }
  bool differentially_monotone() const { return diff_monotone_; }
  bool quasiarithmetic() const { return quasiarithmetic_; }
  // True for the built-in families with a proven subtranslatory property.
  bool subtranslatory_builtin() const { return subtranslatory_builtin_; }
  std::optional<int> finite_length_limit() const { return limit_; }
  double rate() const { return t_; }
  double order() const { return a_; }

  Value value(int l, const T& p) const {
    if (l < 0) throw DomainError("cost evaluated at a negative length");
    switch (kind_) {
      case PenaltyKind::linear:
        return Value(p * T(l));
      case PenaltyKind::exponential:
        if constexpr (std::is_same_v<T, double>) {
          return Value(p * std::exp2(t_ * l));
        } else {
          return Value(p * T(BigInt(1) << static_cast<unsigned>(t_int_ * l)));
        }
      case PenaltyKind::moment:
        if constexpr (std::is_same_v<T, double>) {
          return Value(p * std::pow(static_cast<double>(l), a_));
        } else {
          return Value(p * detail::int_pow(T(l), a_int_));
        }
      case PenaltyKind::quadratic:
        return Value(p * (alpha_ * T(l) + beta_ * T(l) * T(l)));
      case PenaltyKind::length_limited:
        if (l > *limit_) return Value::infinity();
        return base_->value(l, p);
      case PenaltyKind::custom:
        return custom_fn_(l, p);
    }
    throw InternalConsistencyError("unhandled penalty kind");
  }

  // M_f(l, p) = f(l, p) - f(l - 1, p); defined for l >= 1 and meaningless
  // when both neighbors are infinite.
  Value increment(int l, const T& p) const {
    if (l < 1) throw DomainError("increment is defined for lengths >= 1");
    Value hi = value(l, p);
    Value lo = value(l - 1, p);
    if (hi.is_infinite() && lo.is_infinite())
      throw DomainError("increment across two infinite costs is meaningless");
    return hi - lo;
  }

  // --- quasiarithmetic view, always in double precision ---

  double phi(double x) const {
    require_quasiarithmetic();
    switch (kind_) {
      case PenaltyKind::linear:
        return x;
      case PenaltyKind::exponential:
        return std::exp2(t_ * x);
      case PenaltyKind::moment:
        return std::pow(x, a_);
      case PenaltyKind::quadratic:
        return to_double(alpha_) * x + to_double(beta_) * x * x;
      case PenaltyKind::custom:
        return custom_phi_(x);
      default:
        break;
    }
    throw InternalConsistencyError("unhandled quasiarithmetic kind");
  }

  double phi_prime(double x) const {
    require_quasiarithmetic();
    switch (kind_) {
      case PenaltyKind::linear:
        return 1.0;
      case PenaltyKind::exponential:
        return t_ * std::numbers::ln2_v<double> * std::exp2(t_ * x);
      case PenaltyKind::moment:
        return a_ * std::pow(x, a_ - 1.0);
      case PenaltyKind::quadratic:
        return to_double(alpha_) + 2.0 * to_double(beta_) * x;
      case PenaltyKind::custom:
        if (custom_phi_prime_) return custom_phi_prime_(x);
        return numeric_derivative(custom_phi_, x);
      default:
        break;
    }
    throw InternalConsistencyError("unhandled quasiarithmetic kind");
  }

  double phi_inverse(double y) const {
    require_quasiarithmetic();
    switch (kind_) {
      case PenaltyKind::linear:
        return y;
      case PenaltyKind::exponential:
        return std::log2(y) / t_;
      case PenaltyKind::moment:
        return std::pow(y, 1.0 / a_);
      case PenaltyKind::quadratic: {
        double al = to_double(alpha_), be = to_double(beta_);
        if (be == 0) return y / al;
        return (-al + std::sqrt(al * al + 4.0 * be * y)) / (2.0 * be);
      }
      case PenaltyKind::custom:
        if (custom_phi_inverse_) return custom_phi_inverse_(y);
        return numeric_inverse(custom_phi_, y);
      default:
        break;
    }
    throw InternalConsistencyError("unhandled quasiarithmetic kind");
  }

  std::string description() const {
    switch (kind_) {
      case PenaltyKind::linear:
        return "linear";
      case PenaltyKind::exponential:
        return "exp:t=" + detail::fmt_param(t_);
      case PenaltyKind::moment:
        return "moment:a=" + detail::fmt_param(a_);
      case PenaltyKind::quadratic:
        return "quad:alpha=" + detail::fmt_param(to_double(alpha_)) +
               ",beta=" + detail::fmt_param(to_double(beta_));
      case PenaltyKind::length_limited: {
        std::string tail = ",lmax=" + std::to_string(*limit_);
        if (base_->kind_ == PenaltyKind::linear) return "limit:lmax=" + std::to_string(*limit_);
        if (base_->kind_ == PenaltyKind::exponential)
          return "explimit:t=" + detail::fmt_param(base_->t_) + tail;
        return "limit(" + base_->description() + ")" + tail;
      }
      case PenaltyKind::custom:
        return "custom:" + custom_name_;
    }
    return "?";
  }

  // Central difference with one Richardson extrapolation step.
  static double numeric_derivative(const RealFn& g, double x) {
    const double h = 1e-6;
    auto d = [&](double step) { return (g(x + step) - g(x - step)) / (2.0 * step); };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
  }

  // Monotone bisection inverse on [0, inf); phi must be strictly increasing.
  static double numeric_inverse(const RealFn& g, double y) {
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (g(hi) < y) {
      hi *= 2.0;
      if (++guard > 80) throw DomainError("inverse target out of reachable range");
    }
    if (g(lo) > y) throw DomainError("inverse target below the function range");
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      (g(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  explicit CostFunction(PenaltyKind k) : kind_(k) {}

  void require_quasiarithmetic() const {
    if (!quasiarithmetic_)
      throw UnsupportedPenaltyError("penalty '" + description() + "' is not quasiarithmetic");
  }

  PenaltyKind kind_;
  double t_ = 0;
  double a_ = 0;
  long t_int_ = 0;
  long a_int_ = 0;
  T alpha_{};
  T beta_{};
  std::optional<int> limit_;
  std::shared_ptr<const CostFunction> base_;
  std::string custom_name_;
  Fn custom_fn_;
  RealFn custom_phi_;
  RealFn custom_phi_prime_;
  RealFn custom_phi_inverse_;
  bool convex_ = false;
  bool diff_monotone_ = false;
  bool quasiarithmetic_ = false;
  bool subtranslatory_builtin_ = false;
};

template <class T>
struct PenaltyValue {
  Extended<T> raw_sum;            // sum of f(l_i, p_i)
  std::optional<double> campbell;  // phi^-1 of the raw sum, quasiarithmetic only
};

// Total penalty of a length assignment. Terms are accumulated in sorted
// order, so permuting (p_i, l_i) pairs together cannot change the result
// even in floating point.
template <class T>
PenaltyValue<T> penalty_of(const CostFunction<T>& f, const std::vector<T>& weights,
                           const std::vector<int>& lengths) {
  if (weights.size() != lengths.size())
    throw InvalidParameterError("weights and lengths must have equal size");
  std::vector<Extended<T>> terms;
  terms.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    terms.push_back(f.value(lengths[i], weights[i]));
  std::sort(terms.begin(), terms.end());
  Extended<T> sum(T{});
  for (const auto& t : terms) sum += t;
  PenaltyValue<T> out{sum, std::nullopt};
  if (f.quasiarithmetic() && sum.is_finite()) out.campbell = f.phi_inverse(sum.as_double());
  return out;
}

// Falsification-only spot checks of the declared structure flags on a sample
// grid; finding nothing certifies nothing.
template <class T>
struct PropertyReport {
  bool monotone_violation = false;
  bool convexity_violation = false;
  bool diff_monotonicity_violation = false;
  std::string detail;  // first violation, rendered
};

template <class T>
PropertyReport<T> probe_properties(const CostFunction<T>& f, const std::vector<int>& lengths,
                                   const std::vector<T>& probs) {
  PropertyReport<T> rep;
  auto note = [&](const std::string& s) {
    if (rep.detail.empty()) rep.detail = s;
  };
  for (int l : lengths) {
    if (l < 1) continue;
    for (const T& p : probs) {
      Extended<T> m1 = f.increment(l, p);
      if (m1.is_finite() && m1 < Extended<T>(T(0))) {
        rep.monotone_violation = true;
        note("f decreases at l=" + std::to_string(l));
      }
      Extended<T> m2 = f.value(l + 1, p).is_infinite() && f.value(l, p).is_infinite()
                           ? Extended<T>::infinity()
                           : f.increment(l + 1, p);
      if (m2 < m1) {
        rep.convexity_violation = true;
        note("increment shrinks between l=" + std::to_string(l) + " and l+1");
      }
      for (const T& q : probs) {
        if (!(p > q)) continue;
        Extended<T> mp = f.increment(l, p), mq = f.increment(l, q);
        if (mp.is_infinite() || mq.is_infinite()) continue;
        if (!(mp > mq)) {
          rep.diff_monotonicity_violation = true;
          note("increment not strictly larger for the heavier weight at l=" +
               std::to_string(l));
        }
      }
    }
  }
  return rep;
}

}  // namespace qac
