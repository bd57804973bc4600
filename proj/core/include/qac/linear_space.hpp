#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qac/coin_collector.hpp"
#include "qac/cost_function.hpp"
#include "qac/dyadic.hpp"
#include "qac/errors.hpp"
#include "qac/nodeset_coder.hpp"
#include "qac/source_distribution.hpp"
#include "qac/stats.hpp"

namespace qac {

// Pivot level for the divide step: the region [l_lo, l_hi] splits into
// [l_lo, mid - 1], {mid}, [mid + 1, l_hi]. For three or more levels the pivot
// is strictly inside, so both sides shrink.
inline int split_levels(int l_lo, int l_hi) {
  if (l_hi < l_lo) throw InvalidParameterError("empty level range");
  int count = l_hi - l_lo + 1;
  return l_lo + (count + 1) / 2 - 1;
}

namespace detail {

// Attribute policy for the space-reduced merge: packages carry, instead of
// their member list, the count of pivot-level atoms and the total width of
// atoms below the pivot. Both are additive, so memory stays proportional to
// the live item count.
template <class T>
struct RegionAttr {
  long long mid_count;
  Dyadic deep_width;
};

template <class T>
struct AttributePolicy {
  long long mid_count = 0;
  Dyadic deep_width;

  RegionAttr<T> combine(const RegionAttr<T>& a, const RegionAttr<T>& b) const {
    return {a.mid_count + b.mid_count, a.deep_width + b.deep_width};
  }
  void choose(const pmcore::Item<T, RegionAttr<T>>& item) {
    mid_count += item.extra.mid_count;
    deep_width += item.extra.deep_width;
  }
  std::size_t live_overhead() const { return 0; }
};

template <class T>
class LinearSpaceSolver {
 public:
  LinearSpaceSolver(int n, NodeWeightFn<T> weight, SolveStats* stats)
      : n_(n), weight_(std::move(weight)), counts_(static_cast<std::size_t>(n), 0),
        stats_(stats) {}

  // Solves region [i_lo, i_hi] x [l_lo, l_hi] whose restriction of the
  // optimal nodeset has total width t, accumulating per-symbol node counts.
  void solve(int i_lo, int i_hi, int l_lo, int l_hi, Dyadic t) {
    if (t.is_zero()) return;
    if (t.is_negative())
      throw InternalConsistencyError("region width went negative during the split");
    if (i_lo > i_hi)
      throw InternalConsistencyError("nonzero region width without symbols to carry it");
    if (l_hi - l_lo + 1 <= 2) {
      solve_base(i_lo, i_hi, l_lo, l_hi, std::move(t));
      return;
    }
    int mid = split_levels(l_lo, l_hi);

    AttributePolicy<T> pol;
    int next_level = l_hi;
    auto provider = [&]() -> std::optional<pmcore::Row<T, RegionAttr<T>>> {
      while (next_level >= l_lo) {
        int l = next_level--;
        pmcore::Row<T, RegionAttr<T>> row{-l, {}};
        row.items.reserve(static_cast<std::size_t>(i_hi - i_lo + 1));
        for (int i = i_hi; i >= i_lo; --i) {
          if (auto w = weight_(i, l)) {
            RegionAttr<T> attr{l == mid ? 1 : 0, l > mid ? Dyadic::pow2(-l) : Dyadic::zero()};
            row.items.push_back({*w, -static_cast<long long>(node_id(i, l)), false,
                                 std::move(attr)});
          }
        }
        if (!row.items.empty()) return row;
      }
      return std::nullopt;
    };
    pmcore::run<T, RegionAttr<T>>(provider, t, pol, stats_);

    long long m = pol.mid_count;
    if (m < 0 || m > i_hi - i_lo + 1)
      throw InternalConsistencyError("pivot-level count " + std::to_string(m) +
                                     " exceeds the region's symbols");

    // The m pivot-level nodes belong to the m lightest symbols, which then
    // hold every level in [l_lo, mid]. Width above and below the pivot block
    // follows by subtraction.
    Dyadic span_width = (Dyadic::pow2(-(l_lo - 1)) - Dyadic::pow2(-(mid - 1))) * BigInt(m);
    Dyadic pivot_width = Dyadic::pow2(-mid) * BigInt(m);
    Dyadic deep = pol.deep_width;
    Dyadic shallow = std::move(t);
    shallow -= span_width;
    shallow -= pivot_width;
    shallow -= deep;

    int first_forced = i_hi - static_cast<int>(m) + 1;
    for (int i = first_forced; i <= i_hi; ++i)
      counts_[static_cast<std::size_t>(i)] += mid - l_lo + 1;
    solve(i_lo, first_forced - 1, l_lo, mid - 1, std::move(shallow));
    solve(first_forced, i_hi, mid + 1, l_hi, std::move(deep));
  }

  std::vector<int> take_counts() { return std::move(counts_); }

 private:
  long long node_id(int i, int l) const {
    return static_cast<long long>(l - 1) * n_ + i;
  }

  // Two levels or fewer: the plain payload merge is already linear in the
  // region size.
  void solve_base(int i_lo, int i_hi, int l_lo, int l_hi, Dyadic t) {
    pmcore::PayloadPolicy<T> pol;
    int next_level = l_hi;
    auto provider = [&]() -> std::optional<pmcore::Row<T, int>> {
      while (next_level >= l_lo) {
        int l = next_level--;
        pmcore::Row<T, int> row{-l, {}};
        row.items.reserve(static_cast<std::size_t>(i_hi - i_lo + 1));
        for (int i = i_hi; i >= i_lo; --i) {
          if (auto w = weight_(i, l)) {
            int id = static_cast<int>(node_id(i, l));
            row.items.push_back(
                {*w, -static_cast<long long>(id), false, pmcore::PayloadPolicy<T>::atom_ref(id)});
          }
        }
        if (!row.items.empty()) return row;
      }
      return std::nullopt;
    };
    pmcore::run<T, int>(provider, std::move(t), pol, stats_);
    std::vector<int> ids;
    pol.expand(ids);
    for (int id : ids) counts_[static_cast<std::size_t>(id % n_)] += 1;
  }

  int n_;
  NodeWeightFn<T> weight_;
  std::vector<int> counts_;
  SolveStats* stats_;
};

}  // namespace detail

// Space-reduced variant of optimal_lengths: identical output, but the merge
// keeps only additive package attributes and recurses on the two quadrants
// the pivot level determines, so live records stay linear in the symbol
// count. Requires a differentially monotone convex cost; other costs go
// through the general engine.
template <class T>
LengthDistribution optimal_lengths_linear_space(const SourceDistribution<T>& p,
                                                const CostFunction<T>& f,
                                                std::optional<int> l_max_opt = std::nullopt,
                                                SolveStats* stats = nullptr) {
  int n = p.size();
  if (n == 1) return {{0}, kraft_sum({0})};
  if (!f.convex_in_length())
    throw UnsupportedPenaltyError("the nodeset reduction requires a cost convex in length");
  if (!f.differentially_monotone())
    throw UnsupportedPenaltyError(
        "the space-reduced engine relies on differential monotonicity; use the general engine");
  int l_max = detail::resolve_length_limit(n, f, l_max_opt);
  detail::LinearSpaceSolver<T> solver(n, detail::grid_weights(p, f), stats);
  try {
    solver.solve(0, n - 1, 1, l_max, Dyadic(n - 1));
  } catch (const InfeasibleWidthError& e) {
    throw InfeasibleLimitError(std::string("the admissible nodes cannot cover the code: ") +
                               e.what());
  }
  std::vector<int> lengths = solver.take_counts();
  Dyadic k = kraft_sum(lengths);
  if (k != Dyadic::one())
    throw InternalConsistencyError("optimal lengths have Kraft sum " + k.to_string());
  return {std::move(lengths), std::move(k)};
}

}  // namespace qac
