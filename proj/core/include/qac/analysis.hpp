#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qac/cost_function.hpp"
#include "qac/errors.hpp"
#include "qac/nodeset_coder.hpp"
#include "qac/sampling.hpp"
#include "qac/source_distribution.hpp"

namespace qac {

// Absolute slack granted when testing the subtranslatory inequality.
inline constexpr double kSubtranslatoryTolerance = 1e-9;

// Two sample penalties defined through an explicit companion function.
// cubic11 (x^3 + 11x) is increasing and convex, so it codes through the
// engine, yet its expected-gradient inequality fails on a large region.
inline CostFunction<double> cubic11_phi() {
  return CostFunction<double>::custom_quasiarithmetic(
      "cubic11", [](double x) { return x * x * x + 11.0 * x; }, true,
      [](double x) { return 3.0 * x * x + 11.0; });
}

// sqrt (concave companion) is increasing but not convex in length; it is
// analysis-only and the coding engines reject it.
inline CostFunction<double> sqrt_phi() {
  return CostFunction<double>::custom_quasiarithmetic(
      "sqrt", [](double x) { return std::sqrt(x); }, false,
      [](double x) { return 0.5 / std::sqrt(x); }, [](double y) { return y * y; });
}

inline std::optional<CostFunction<double>> named_phi(const std::string& name) {
  if (name == "cubic11") return cubic11_phi();
  if (name == "sqrt") return sqrt_phi();
  return std::nullopt;
}

// Box the sampler can be confined to: points are drawn with the given
// Euclidean radius around (probs, lengths), probabilities staying on the
// simplex. Useful for exhibiting a counterexample near a known point.
struct FocusRegion {
  std::vector<double> probs;
  std::vector<double> lengths;
  double radius = 0.1;
};

struct SamplerConfig {
  std::size_t samples = 2000;
  std::uint64_t seed = 20260819;
  int n_min = 2;
  int n_max = 6;
  double l_min = 0.05;
  double l_max = 8.0;
  std::optional<FocusRegion> focus;
};

struct SubtranslatoryCounterexample {
  std::vector<double> probs;
  std::vector<double> lengths;
  double gradient_sum;      // sum_i p_i phi'(l_i)
  double penalty_gradient;  // phi'(L) at the quasiarithmetic mean L
};

struct SubtranslatoryReport {
  bool known_subtranslatory = false;  // established analytically for built-ins
  bool violation_found = false;
  std::optional<SubtranslatoryCounterexample> counterexample;
  std::size_t samples_checked = 0;
};

namespace detail {

// One subtranslatory probe at real-valued lengths; true means violated.
inline bool subtranslatory_violated(const CostFunction<double>& f,
                                    const std::vector<double>& probs,
                                    const std::vector<double>& lengths,
                                    SubtranslatoryCounterexample* out) {
  double raw = 0.0;
  double grad = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    raw += probs[i] * f.phi(lengths[i]);
    grad += probs[i] * f.phi_prime(lengths[i]);
  }
  double mean = f.phi_inverse(raw);
  double bound = f.phi_prime(mean);
  if (!(grad > bound + kSubtranslatoryTolerance)) return false;
  if (out) *out = {probs, lengths, grad, bound};
  return true;
}

// Draws (probs, lengths) inside the focus ball: simplex-tangent perturbation
// of the probabilities, boxed perturbation of the lengths, rejected until the
// joint Euclidean distance fits the radius.
inline void sample_focused(Sampler& rng, const FocusRegion& box, std::vector<double>& probs,
                           std::vector<double>& lengths) {
  std::size_t n = box.probs.size();
  for (;;) {
    probs = box.probs;
    lengths = box.lengths;
    double shift = 0.0;
    double dist2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = rng.uniform(-box.radius, box.radius);
      probs[i] += d;
      shift += d;
    }
    for (double& pi : probs) pi -= shift / static_cast<double>(n);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (probs[i] <= 1e-9) ok = false;
      dist2 += (probs[i] - box.probs[i]) * (probs[i] - box.probs[i]);
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < n; ++i) {
      double d = rng.uniform(-box.radius, box.radius);
      lengths[i] += d;
      if (lengths[i] <= 1e-6) ok = false;
      dist2 += d * d;
    }
    if (ok && dist2 <= box.radius * box.radius) return;
  }
}

}  // namespace detail

// Samples the inequality sum_i p_i phi'(l_i) <= phi'(L) over random sources
// and real-valued length vectors. Built-in penalties carry an analytic
// guarantee, reported via known_subtranslatory; sampling can only falsify.
inline SubtranslatoryReport subtranslatory_check(const CostFunction<double>& f,
                                                 const SamplerConfig& cfg = {}) {
  if (!f.quasiarithmetic())
    throw UnsupportedPenaltyError("the subtranslatory test needs a companion function");
  SubtranslatoryReport rep;
  rep.known_subtranslatory = f.subtranslatory_builtin();
  Sampler rng(cfg.seed);
  std::vector<double> probs;
  std::vector<double> lengths;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    if (cfg.focus) {
      if (cfg.focus->probs.size() != cfg.focus->lengths.size() || cfg.focus->probs.empty())
        throw InvalidParameterError("focus region needs matching probs and lengths");
      detail::sample_focused(rng, *cfg.focus, probs, lengths);
    } else {
      int n = static_cast<int>(rng.uniform_int(cfg.n_min, cfg.n_max));
      probs = rng.dirichlet(n);
      lengths.resize(static_cast<std::size_t>(n));
      for (double& l : lengths) l = rng.uniform(cfg.l_min, cfg.l_max);
    }
    ++rep.samples_checked;
    SubtranslatoryCounterexample ce;
    if (detail::subtranslatory_violated(f, probs, lengths, &ce)) {
      rep.violation_found = true;
      rep.counterexample = std::move(ce);
      break;
    }
  }
  return rep;
}

struct EntropyResult {
  double value = 0.0;                  // quasiarithmetic mean at the relaxed optimum
  std::vector<double> relaxed_lengths; // real-valued minimizer under the Kraft equality
  double lagrange_multiplier = 0.0;
  bool converged = false;
  double residual = 0.0;               // |kraft sum - 1| at the reported lengths
};

namespace detail {

// Stationary length for one symbol at multiplier lambda: the zero of
// p phi'(l) - lambda ln2 2^-l, clamped to [0, hi]. The function increases in
// l, so bisection applies.
inline double relaxed_length(const CostFunction<double>& f, double p, double lambda, double hi) {
  constexpr double ln2 = 0.6931471805599453;
  auto g = [&](double l) { return p * f.phi_prime(l) - lambda * ln2 * std::exp2(-l); };
  if (g(0.0) >= 0.0) return 0.0;
  if (g(hi) <= 0.0) return hi;
  double lo = 0.0;
  for (int it = 0; it < 90; ++it) {
    double m = 0.5 * (lo + hi);
    (g(m) < 0.0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

inline double kraft_of_real(const std::vector<double>& lengths) {
  double k = 0.0;
  for (double l : lengths) k += std::exp2(-l);
  return k;
}

}  // namespace detail

// Lower bound on the penalty of any prefix code: minimizes the penalty over
// real-valued lengths subject to the Kraft equality, via bisection on the
// Kraft multiplier. Linear costs recover the Shannon entropy; exponential
// costs of rate t recover the Renyi entropy of order 1/(1+t).
inline EntropyResult generalized_entropy(const SourceDistribution<double>& p,
                                         const CostFunction<double>& f) {
  if (!f.quasiarithmetic())
    throw UnsupportedPenaltyError("the entropy bound needs a companion function");
  if (!p.normalized())
    throw InvalidParameterError("the entropy bound needs a normalized distribution");
  int n = p.size();
  constexpr double l_cap = 96.0;
  std::vector<double> lengths(static_cast<std::size_t>(n), 0.0);
  auto kraft_at = [&](double lambda) {
    for (int i = 0; i < n; ++i)
      lengths[static_cast<std::size_t>(i)] = detail::relaxed_length(f, p[i], lambda, l_cap);
    return detail::kraft_of_real(lengths);
  };

  EntropyResult res;
  if (n == 1) {
    res.value = f.phi_inverse(f.phi(0.0));
    res.relaxed_lengths = {0.0};
    res.converged = true;
    return res;
  }
  // kraft_at decreases in lambda from n (all lengths zero) toward zero.
  double lo = 0.0;
  double hi = 1.0;
  int guard = 0;
  while (kraft_at(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200)
      throw InternalConsistencyError("no multiplier reaches the Kraft equality");
  }
  for (int it = 0; it < 140; ++it) {
    double mid = 0.5 * (lo + hi);
    (kraft_at(mid) > 1.0 ? lo : hi) = mid;
  }
  double lambda = 0.5 * (lo + hi);
  double kraft = kraft_at(lambda);
  double raw = 0.0;
  for (int i = 0; i < n; ++i) raw += p[i] * f.phi(lengths[static_cast<std::size_t>(i)]);
  res.value = f.phi_inverse(raw);
  res.relaxed_lengths = lengths;
  res.lagrange_multiplier = lambda;
  res.residual = std::fabs(kraft - 1.0);
  res.converged = res.residual <= 1e-9;
  return res;
}

struct RedundancyReport {
  EntropyResult entropy;
  std::vector<int> lengths;  // optimal integer code
  double penalty = 0.0;      // quasiarithmetic mean of the code
  double redundancy = 0.0;   // penalty - entropy
};

// Entropy bound, optimal code, and their gap. For subtranslatory penalties
// the gap lies in [0, 1).
inline RedundancyReport redundancy_report(const SourceDistribution<double>& p,
                                          const CostFunction<double>& f,
                                          std::optional<int> l_max = std::nullopt) {
  RedundancyReport rep;
  rep.entropy = generalized_entropy(p, f);
  rep.lengths = optimal_lengths(p, f, l_max).lengths;
  auto pv = penalty_of(f, p.weights(), rep.lengths);
  if (!pv.campbell)
    throw InternalConsistencyError("finite code with no quasiarithmetic mean");
  rep.penalty = *pv.campbell;
  rep.redundancy = rep.penalty - rep.entropy.value;
  return rep;
}

// Largest codeword length a minimum-redundancy (linear) code can use, from
// the two smallest probabilities: min(floor(log_phi((phi+1)/(p_n phi +
// p_{n-1}))), n - 1) with phi the golden ratio.
inline int buro_length_bound(const SourceDistribution<double>& p) {
  int n = p.size();
  if (n < 2) throw InvalidParameterError("the length bound needs at least two symbols");
  constexpr double golden = 1.6180339887498948482;
  double tail = p[n - 1] * golden + p[n - 2];
  double bound = std::log((golden + 1.0) / tail) / std::log(golden);
  int b = static_cast<int>(std::floor(bound));
  return std::min(b, n - 1);
}

struct FlatterCounterexample {
  int l = 0;
  int l_prime = 0;
  double p = 0.0;
  double p_prime = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct FlatterReport {
  bool flatter = true;  // no violation found across the samples
  std::optional<FlatterCounterexample> counterexample;
  std::size_t samples_checked = 0;
};

// Samples the exchange inequality that orders penalties by the uniformity of
// their optimal codes: g is flatter than f when
// M_g(l, p) M_f(l', p') <= M_f(l, p) M_g(l', p') for every l' > l.
// Flatter penalties never assign strictly deeper optimal codes.
inline FlatterReport is_flatter(const CostFunction<double>& g, const CostFunction<double>& f,
                                const SamplerConfig& cfg = {}) {
  FlatterReport rep;
  Sampler rng(cfg.seed);
  constexpr int l_top = 16;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    int l = rng.uniform_int(1, l_top - 1);
    int lp = rng.uniform_int(l + 1, l_top);
    double pv = rng.uniform(1e-6, 1.0);
    double pq = rng.uniform(1e-6, 1.0);
    auto mg = g.increment(l, pv);
    auto mf_p = f.increment(lp, pq);
    auto mf = f.increment(l, pv);
    auto mg_p = g.increment(lp, pq);
    if (mg.is_infinite() || mf_p.is_infinite() || mf.is_infinite() || mg_p.is_infinite())
      continue;
    ++rep.samples_checked;
    double lhs = mg.finite() * mf_p.finite();
    double rhs = mf.finite() * mg_p.finite();
    if (lhs > rhs + 1e-12 * (1.0 + std::fabs(rhs))) {
      rep.flatter = false;
      rep.counterexample = {l, lp, pv, pq, lhs, rhs};
      break;
    }
  }
  return rep;
}

}  // namespace qac
