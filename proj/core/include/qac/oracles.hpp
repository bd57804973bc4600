#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qac/coin_collector.hpp"
#include "qac/cost_function.hpp"
#include "qac/dyadic.hpp"
#include "qac/errors.hpp"
#include "qac/nodeset_coder.hpp"
#include "qac/numeric.hpp"
#include "qac/source_distribution.hpp"

namespace qac {

// Exhaustive enumeration stays tractable only for tiny instances; the caps
// make accidental blowups loud instead of slow.
struct OracleConfig {
  int max_n_code = 8;
  int max_m_coins = 16;
};

namespace detail {

template <class T>
struct HuffNode {
  T weight;
  int left = -1;  // -1 marks a leaf
  int right = -1;
};

// Sibling-queue construction shared by the classic and the exponential
// variant. Ties prefer pending leaves over packages and, among equal leaf
// weights, the higher original index; packages merge in formation order.
// factor = 1 gives Huffman's rule, factor = 2^t the exponential rule.
template <class T>
std::vector<int> huffman_core(const std::vector<T>& weights, const T& factor) {
  int n = static_cast<int>(weights.size());
  if (n == 1) return {0};
  std::vector<HuffNode<T>> nodes;
  nodes.reserve(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i) nodes.push_back({weights[static_cast<std::size_t>(i)], -1, -1});
  std::vector<int> pkgs;
  std::size_t qp = 0;
  int sp = n - 1;  // weights are nonincreasing, so leaves pop from the back
  auto pop = [&]() -> int {
    bool have_leaf = sp >= 0;
    bool have_pkg = qp < pkgs.size();
    if (have_leaf &&
        (!have_pkg || !(nodes[static_cast<std::size_t>(pkgs[qp])].weight <
                        nodes[static_cast<std::size_t>(sp)].weight)))
      return sp--;
    return pkgs[qp++];
  };
  for (int merge = 0; merge < n - 1; ++merge) {
    int a = pop();
    int b = pop();
    T w = factor * (nodes[static_cast<std::size_t>(a)].weight +
                    nodes[static_cast<std::size_t>(b)].weight);
    nodes.push_back({std::move(w), a, b});
    pkgs.push_back(static_cast<int>(nodes.size()) - 1);
  }
  std::vector<int> lengths(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> stack{{static_cast<int>(nodes.size()) - 1, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    const auto& nd = nodes[static_cast<std::size_t>(id)];
    if (nd.left < 0) {
      lengths[static_cast<std::size_t>(id)] = depth;
    } else {
      stack.push_back({nd.left, depth + 1});
      stack.push_back({nd.right, depth + 1});
    }
  }
  return lengths;
}

}  // namespace detail

// Classic minimum-redundancy code by sibling queues, bottom-merge flavor:
// among optima it takes the one whose longest lengths are smallest.
template <class T>
std::vector<int> huffman_bottom_merge(const SourceDistribution<T>& p) {
  return detail::huffman_core(p.weights(), T(1));
}

// Exponential variant: parents weigh 2^t times the sum of their children,
// minimizing sum_i p_i 2^(t l_i).
inline std::vector<int> exponential_huffman(const SourceDistribution<double>& p, double t) {
  if (!(t > 0.0)) throw InvalidParameterError("the exponential rate must be positive");
  return detail::huffman_core(p.weights(), std::exp2(t));
}

inline std::vector<int> exponential_huffman(const SourceDistribution<Rat>& p, int t) {
  if (t < 1) throw InvalidParameterError("the exponential rate must be positive");
  if (t > 62) throw InvalidParameterError("exponential rate too large for the oracle");
  return detail::huffman_core(p.weights(), Rat(BigInt(1) << t));
}

namespace detail {

// Reversed-vector comparison: a beats b when, reading lengths from the last
// symbol backward, a is lexicographically smaller.
inline bool reversed_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

template <class T>
struct BruteBest {
  bool found = false;
  Extended<T> raw{};
  std::vector<int> lengths;

  void offer(const Extended<T>& sum, const std::vector<int>& ls) {
    if (sum.is_infinite()) return;
    if (!found || sum < raw || (sum == raw && reversed_less(ls, lengths))) {
      found = true;
      raw = sum;
      lengths = ls;
    }
  }
};

}  // namespace detail

// Reference solver: enumerates every length vector with Kraft sum exactly one
// and returns the cheapest, breaking penalty ties toward the vector whose
// deepest lengths are smallest. Differentially monotone costs only need the
// nondecreasing vectors; otherwise all assignments are tried.
template <class T>
std::vector<int> brute_force_optimal_code(const SourceDistribution<T>& p,
                                          const CostFunction<T>& f,
                                          std::optional<int> l_max_opt = std::nullopt,
                                          const OracleConfig& cfg = {}) {
  int n = p.size();
  if (n > cfg.max_n_code)
    throw CapExceededError("brute force handles at most " + std::to_string(cfg.max_n_code) +
                           " symbols");
  if (n == 1) return {0};
  int l_max = detail::resolve_length_limit(n, f, l_max_opt);
  const std::uint64_t scale = 1ull << l_max;

  detail::BruteBest<T> best;
  std::vector<int> lengths(static_cast<std::size_t>(n), 0);
  bool monotone_only = f.differentially_monotone();
  std::vector<int> perm;

  auto evaluate = [&](const std::vector<int>& ls) {
    best.offer(penalty_of(f, p.weights(), ls).raw_sum, ls);
  };

  // Depth-first over nondecreasing lengths with an exact width budget in
  // units of 2^-l_max.
  auto dfs = [&](auto&& self, int i, int l_floor, std::uint64_t budget) -> void {
    if (i == n) {
      if (budget != 0) return;
      if (monotone_only) {
        evaluate(lengths);
      } else {
        perm = lengths;
        do {
          evaluate(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      return;
    }
    std::uint64_t rest = static_cast<std::uint64_t>(n - 1 - i);
    for (int l = l_floor; l <= l_max; ++l) {
      std::uint64_t c = scale >> l;
      if (c > budget) continue;
      std::uint64_t after = budget - c;
      if (after > rest * (scale >> l)) break;     // coarsest remaining words fall short
      if (after < rest * (scale >> l_max)) continue;  // overspent; retry with finer words
      lengths[static_cast<std::size_t>(i)] = l;
      self(self, i + 1, l, after);
    }
  };
  dfs(dfs, 0, 1, scale);
  if (!best.found)
    throw InfeasibleLimitError("no admissible length vector meets the Kraft equality");
  return std::move(best.lengths);
}

// Reference solver for the minimum-weight exact-width selection: enumerates
// all subsets. Weight ties resolve toward the subset taking more of the
// widest coins, then class by class toward the earlier coins in tie order.
template <class T>
CoinSolution<T> brute_force_coin_collector(const std::vector<Coin<T>>& items, const Dyadic& t,
                                           const OracleConfig& cfg = {}) {
  int m = static_cast<int>(items.size());
  if (m > cfg.max_m_coins)
    throw CapExceededError("brute force handles at most " + std::to_string(cfg.max_m_coins) +
                           " coins");
  if (t.is_negative()) throw InvalidParameterError("total width must be nonnegative");
  CoinSolution<T> sol;
  if (t.is_zero()) return sol;

  int e_min = 0;
  int e_max = 0;
  std::vector<int> exps(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& c = items[static_cast<std::size_t>(i)];
    if (c.width.is_negative() || c.width.is_zero() || !c.width.is_power_of_two())
      throw InvalidParameterError("coin widths must be powers of two");
    int e = c.width.exponent();
    exps[static_cast<std::size_t>(i)] = e;
    if (i == 0 || e < e_min) e_min = e;
    if (i == 0 || e > e_max) e_max = e;
  }
  if (e_max - e_min > 40)
    throw CapExceededError("coin width range too wide for exhaustive search");

  // Everything scales to integer multiples of the narrowest width.
  std::vector<std::uint64_t> scaled(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    scaled[static_cast<std::size_t>(i)] = 1ull
                                          << (exps[static_cast<std::size_t>(i)] - e_min);
  if (t.exponent() < e_min) throw InfeasibleWidthError("target is finer than every coin");
  BigInt t_scaled_big = t.mantissa() << static_cast<unsigned>(t.exponent() - e_min);
  std::uint64_t width_cap = 0;
  for (auto s : scaled) width_cap += s;
  if (t_scaled_big > width_cap) throw InfeasibleWidthError("coins cannot reach the target width");
  std::uint64_t t_scaled = t_scaled_big.convert_to<std::uint64_t>();

  // Tie order within each width class, then classes from widest down.
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (exps[static_cast<std::size_t>(a)] != exps[static_cast<std::size_t>(b)])
      return exps[static_cast<std::size_t>(a)] > exps[static_cast<std::size_t>(b)];
    const T& wa = items[static_cast<std::size_t>(a)].weight;
    const T& wb = items[static_cast<std::size_t>(b)].weight;
    if (wa != wb) return wa < wb;
    return a > b;
  });

  bool found = false;
  std::uint32_t best_mask = 0;
  T best_weight{};
  auto better = [&](std::uint32_t mask, const T& weight) {
    if (!found) return true;
    if (weight != best_weight) return weight < best_weight;
    // Count vector, widest class first: more coins wins.
    std::size_t k = 0;
    while (k < order.size()) {
      int e = exps[static_cast<std::size_t>(order[k])];
      int ca = 0;
      int cb = 0;
      std::size_t k2 = k;
      for (; k2 < order.size() && exps[static_cast<std::size_t>(order[k2])] == e; ++k2) {
        if (mask & (1u << order[k2])) ++ca;
        if (best_mask & (1u << order[k2])) ++cb;
      }
      if (ca != cb) return ca > cb;
      k = k2;
    }
    // Same counts: earlier tie-order positions win, class by class.
    for (std::size_t i = 0; i < order.size(); ++i) {
      bool ia = mask & (1u << order[i]);
      bool ib = best_mask & (1u << order[i]);
      if (ia != ib) return ia;
    }
    return false;
  };

  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::uint64_t w = 0;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) w += scaled[static_cast<std::size_t>(i)];
    if (w != t_scaled) continue;
    T weight{};
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) weight += items[static_cast<std::size_t>(i)].weight;
    if (better(mask, weight)) {
      found = true;
      best_mask = mask;
      best_weight = std::move(weight);
    }
  }
  if (!found) throw InfeasibleWidthError("no subset of the coins has the target width");
  for (int i = 0; i < m; ++i) {
    if (best_mask & (1u << i)) {
      sol.chosen.push_back(i);
      sol.total_weight += items[static_cast<std::size_t>(i)].weight;
      sol.total_width += items[static_cast<std::size_t>(i)].width;
    }
  }
  return sol;
}

}  // namespace qac
