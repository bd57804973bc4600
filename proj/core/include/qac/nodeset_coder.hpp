#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qac/coin_collector.hpp"
#include "qac/cost_function.hpp"
#include "qac/dyadic.hpp"
#include "qac/errors.hpp"
#include "qac/numeric.hpp"
#include "qac/source_distribution.hpp"
#include "qac/stats.hpp"

namespace qac {

// Grid node (symbol, level): width 2^-level, weight M_f(level, p_symbol).
// Symbols are 0-based; levels start at 1.
template <class T>
struct Node {
  int symbol;
  int level;
  T weight;

  Dyadic width() const { return Dyadic::pow2(-level); }
};

struct LengthDistribution {
  std::vector<int> lengths;
  Dyadic kraft;
};

inline Dyadic kraft_sum(const std::vector<int>& lengths) {
  Dyadic k;
  for (int l : lengths) {
    if (l < 0) throw InvalidLengthsError("negative codeword length");
    k += Dyadic::pow2(-l);
  }
  return k;
}

namespace detail {

template <class T>
int resolve_length_limit(int n, const CostFunction<T>& f, std::optional<int> requested) {
  int l_max = requested.value_or(n - 1);
  if (l_max < 1) throw InvalidParameterError("the length limit must be at least 1");
  if (l_max > n - 1) l_max = n - 1;  // no Kraft-tight code needs longer words
  if (auto lim = f.finite_length_limit()) l_max = std::min(l_max, *lim);
  if (l_max < ceil_log2(n))
    throw InfeasibleLimitError("no prefix code for " + std::to_string(n) +
                               " symbols fits within length " + std::to_string(l_max));
  return l_max;
}

// Weight of node (symbol, level) or nothing when the cost is infinite there.
template <class T>
using NodeWeightFn = std::function<std::optional<T>(int symbol, int level)>;

template <class T>
NodeWeightFn<T> grid_weights(const SourceDistribution<T>& p, const CostFunction<T>& f) {
  return [&p, &f](int symbol, int level) -> std::optional<T> {
    auto m = f.increment(level, p[symbol]);
    if (m.is_infinite()) return std::nullopt;
    return m.finite();
  };
}

}  // namespace detail

// Materializes the full node grid, level-major, omitting infinite-weight
// nodes. l_max must lie in [ceil(log2 n), n - 1] after clamping to any
// finite length limit of the cost function.
template <class T>
std::vector<Node<T>> build_node_grid(const SourceDistribution<T>& p, const CostFunction<T>& f,
                                     std::optional<int> l_max_opt = std::nullopt) {
  int n = p.size();
  if (n < 2) throw InvalidParameterError("a node grid needs at least two symbols");
  int l_max = detail::resolve_length_limit(n, f, l_max_opt);
  auto weight = detail::grid_weights(p, f);
  std::vector<Node<T>> grid;
  grid.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(l_max));
  for (int l = 1; l <= l_max; ++l)
    for (int i = 0; i < n; ++i)
      if (auto w = weight(i, l)) grid.push_back({i, l, *w});
  return grid;
}

// Converts a nodeset to per-symbol lengths. Valid nodesets contain, for each
// symbol, exactly the nodes (symbol, 1..l); anything else is rejected with a
// diagnostic naming the offending symbol.
template <class T>
std::vector<int> nodeset_to_lengths(const std::vector<Node<T>>& nodes, int n) {
  if (n < 1) throw InvalidParameterError("symbol count must be positive");
  std::vector<std::vector<int>> levels(static_cast<std::size_t>(n));
  for (const auto& nd : nodes) {
    if (nd.symbol < 0 || nd.symbol >= n)
      throw InvalidNodesetError("node references symbol " + std::to_string(nd.symbol) +
                                " outside the source");
    if (nd.level < 1) throw InvalidNodesetError("node level below 1");
    levels[static_cast<std::size_t>(nd.symbol)].push_back(nd.level);
  }
  std::vector<int> lengths(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    auto& ls = levels[static_cast<std::size_t>(i)];
    std::sort(ls.begin(), ls.end());
    for (std::size_t k = 0; k < ls.size(); ++k) {
      if (ls[k] != static_cast<int>(k) + 1)
        throw InvalidNodesetError("symbol " + std::to_string(i) +
                                  " holds levels that are not a prefix: expected " +
                                  std::to_string(k + 1) + ", found " + std::to_string(ls[k]));
    }
    lengths[static_cast<std::size_t>(i)] = static_cast<int>(ls.size());
  }
  return lengths;
}

// Canonical codebook: symbols sorted by (length, index) receive consecutive
// binary values, left-shifted at each length increase. Kraft sum above one is
// rejected. A single symbol of length zero encodes as the empty word.
inline std::vector<std::string> canonical_codebook(const std::vector<int>& lengths) {
  int n = static_cast<int>(lengths.size());
  if (n == 0) throw InvalidLengthsError("empty length vector");
  if (n == 1) {
    if (lengths[0] != 0) throw InvalidLengthsError("a single symbol codes with length 0");
    return {""};
  }
  Dyadic k;
  for (int l : lengths) {
    if (l < 1) throw InvalidLengthsError("codeword lengths must be at least 1");
    k += Dyadic::pow2(-l);
  }
  if (k > Dyadic::one())
    throw InvalidLengthsError("lengths violate the Kraft inequality (sum " + k.to_string() +
                              ")");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (lengths[a] != lengths[b]) return lengths[a] < lengths[b];
    return a < b;
  });
  std::vector<std::string> words(static_cast<std::size_t>(n));
  BigInt code = 0;
  int prev_len = 0;
  for (int idx : order) {
    int l = lengths[static_cast<std::size_t>(idx)];
    code <<= static_cast<unsigned>(l - prev_len);
    std::string w(static_cast<std::size_t>(l), '0');
    for (int b = 0; b < l; ++b)
      if (boost::multiprecision::bit_test(code, static_cast<unsigned>(b)))
        w[static_cast<std::size_t>(l - 1 - b)] = '1';
    words[static_cast<std::size_t>(idx)] = std::move(w);
    ++code;
    prev_len = l;
  }
  return words;
}

// Sub-multiset of the given nodes with total width exactly r, where r is a
// low fragment of the total width: width(nodes) = x * 2^-k + r with
// 0 < r <= 2^-k. Constructive: peels minimum-width nodes first (equal widths
// in input order), so the fragment always stays a multiple of the coming
// width; a peel that gets stuck reports the precondition failure.
template <class T>
std::vector<Node<T>> subset_of_width(const std::vector<Node<T>>& nodes, Dyadic r) {
  Dyadic total;
  for (const auto& nd : nodes) total += nd.width();
  if (r.is_zero() || r.is_negative() || r > total)
    throw DomainError("target width must satisfy 0 < r <= width(nodes)");
  std::vector<int> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return nodes[a].level > nodes[b].level; });
  std::vector<Node<T>> out;
  for (int idx : order) {
    const auto& nd = nodes[static_cast<std::size_t>(idx)];
    Dyadic w = nd.width();
    if (w > r)
      throw DomainError("target width " + r.to_string() +
                        " is not a low fragment of the total width " + total.to_string());
    out.push_back(nd);
    r -= w;
    if (r.is_zero()) return out;
  }
  throw InternalConsistencyError("nodes exhausted before the target width was met");
}

namespace detail {

// Shared driver: runs the coin-collector reduction at total width n - 1 over
// lazily generated grid rows (deepest level first) and returns per-symbol
// lengths. sort_rows forces a weight sort per row, needed when weights are
// not monotone in the symbol index.
template <class T>
std::vector<int> solve_grid(int n, int l_max, const NodeWeightFn<T>& weight, bool sort_rows,
                            SolveStats* stats) {
  pmcore::PayloadPolicy<T> pol;
  auto node_id = [n](int symbol, int level) { return (level - 1) * n + symbol; };
  int next_level = l_max;
  auto provider = [&]() -> std::optional<pmcore::Row<T, int>> {
    while (next_level >= 1) {
      int l = next_level--;
      pmcore::Row<T, int> row{-l, {}};
      row.items.reserve(static_cast<std::size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        if (auto w = weight(i, l)) {
          int id = node_id(i, l);
          row.items.push_back(
              {*w, -static_cast<long long>(id), false, pmcore::PayloadPolicy<T>::atom_ref(id)});
        }
      }
      if (sort_rows)
        std::stable_sort(row.items.begin(), row.items.end(), pmcore::tie_less<T, int>);
      if (!row.items.empty()) return row;
    }
    return std::nullopt;
  };
  try {
    pmcore::run<T, int>(provider, Dyadic(n - 1), pol, stats);
  } catch (const InfeasibleWidthError& e) {
    throw InfeasibleLimitError(std::string("the admissible nodes cannot cover the code: ") +
                               e.what());
  }
  std::vector<int> ids;
  pol.expand(ids);
  std::vector<Node<T>> nodes;
  nodes.reserve(ids.size());
  for (int id : ids) nodes.push_back({id % n, id / n + 1, T{}});
  try {
    return nodeset_to_lengths(nodes, n);
  } catch (const InvalidNodesetError& e) {
    throw InternalConsistencyError(std::string("optimal selection is not a code nodeset: ") +
                                   e.what());
  }
}

}  // namespace detail

// Optimal code lengths for the given convex cost. Levels run up to l_max
// (default n - 1, clamped by any finite length limit). The returned vector
// carries an exactly-one Kraft sum and canonical tie-breaking: the deepest
// lengths are as small as the optimum admits.
template <class T>
LengthDistribution optimal_lengths(const SourceDistribution<T>& p, const CostFunction<T>& f,
                                   std::optional<int> l_max_opt = std::nullopt,
                                   SolveStats* stats = nullptr) {
  int n = p.size();
  if (n == 1) return {{0}, kraft_sum({0})};
  if (!f.convex_in_length())
    throw UnsupportedPenaltyError("the nodeset reduction requires a cost convex in length");
  int l_max = detail::resolve_length_limit(n, f, l_max_opt);
  auto weight = detail::grid_weights(p, f);
  std::vector<int> lengths =
      detail::solve_grid<T>(n, l_max, weight, !f.differentially_monotone(), stats);
  Dyadic k = kraft_sum(lengths);
  if (k != Dyadic::one())
    throw InternalConsistencyError("optimal lengths have Kraft sum " + k.to_string());
  return {std::move(lengths), std::move(k)};
}

// Variant with one cost function per symbol. Weight monotonicity across rows
// is not assumed, so rows are always sorted.
template <class T>
LengthDistribution optimal_lengths(const SourceDistribution<T>& p,
                                   const std::vector<CostFunction<T>>& per_symbol,
                                   std::optional<int> l_max_opt = std::nullopt,
                                   SolveStats* stats = nullptr) {
  int n = p.size();
  if (static_cast<int>(per_symbol.size()) != n)
    throw InvalidParameterError("need exactly one cost function per symbol");
  if (n == 1) return {{0}, kraft_sum({0})};
  int limit = n - 1;
  for (const auto& f : per_symbol) {
    if (!f.convex_in_length())
      throw UnsupportedPenaltyError("the nodeset reduction requires costs convex in length");
    if (auto lim = f.finite_length_limit()) limit = std::min(limit, *lim);
  }
  int l_max = std::min(l_max_opt.value_or(n - 1), limit);
  if (l_max < ceil_log2(n))
    throw InfeasibleLimitError("no prefix code for " + std::to_string(n) +
                               " symbols fits within length " + std::to_string(l_max));
  detail::NodeWeightFn<T> weight = [&p, &per_symbol](int symbol, int level) -> std::optional<T> {
    auto m = per_symbol[static_cast<std::size_t>(symbol)].increment(level, p[symbol]);
    if (m.is_infinite()) return std::nullopt;
    return m.finite();
  };
  std::vector<int> lengths = detail::solve_grid<T>(n, l_max, weight, true, stats);
  Dyadic k = kraft_sum(lengths);
  if (k != Dyadic::one())
    throw InternalConsistencyError("optimal lengths have Kraft sum " + k.to_string());
  return {std::move(lengths), std::move(k)};
}

}  // namespace qac
