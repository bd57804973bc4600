#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qac/dyadic.hpp"
#include "qac/errors.hpp"
#include "qac/stats.hpp"

namespace qac {

// An atomic coin: a width that is an exact power of two and a numismatic
// weight. Identity is the position in the input list.
template <class T>
struct Coin {
  Dyadic width;
  T weight;
};

template <class T>
struct CoinSolution {
  std::vector<int> chosen;  // atomic coin ids, ascending
  T total_weight{};
  Dyadic total_width;
};

// Splits a positive total width as odd * 2^k.
inline std::pair<BigInt, Dyadic> decompose_total_width(const Dyadic& t) {
  if (t.is_zero())
    throw InvalidParameterError("a zero total width has no odd/power-of-two split");
  if (t.is_negative()) throw InvalidParameterError("total width must be positive");
  return t.decompose();
}

namespace pmcore {

// One item inside a width class: an atomic coin or a package. The tie order
// within a class is (weight, atoms before packages, key), where key is the
// negated original index for atoms (higher index first) and the formation
// sequence number for packages (older first).
template <class T, class X>
struct Item {
  T weight;
  long long key;
  bool is_pkg;
  X extra;
};

template <class T, class X>
bool tie_less(const Item<T, X>& a, const Item<T, X>& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  if (a.is_pkg != b.is_pkg) return b.is_pkg;
  return a.key < b.key;
}

template <class T, class X>
struct Row {
  int exp;  // items in this class have width 2^exp
  std::vector<Item<T, X>> items;
};

// Class-by-class merge from the smallest width upward. Rows arrive through
// `next_row` in strictly ascending exponent order, each presorted by the tie
// order. The policy supplies package payload combination and receives every
// chosen item. Throws InfeasibleWidthError when no subset has width t.
template <class T, class X, class Policy>
void run(const std::function<std::optional<Row<T, X>>()>& next_row, Dyadic t, Policy& pol,
         SolveStats* stats) {
  if (t.is_negative()) throw InvalidParameterError("total width must be nonnegative");
  if (stats) ++stats->merge_runs;
  std::vector<Item<T, X>> carried;
  int carried_exp = 0;
  long long seq = 0;
  std::optional<Row<T, X>> pending = next_row();
  while (!t.is_zero()) {
    bool have_row = pending.has_value();
    bool have_carried = !carried.empty();
    if (!have_row && !have_carried)
      throw InfeasibleWidthError("coins exhausted with residual width " + t.to_string());
    int e;
    if (have_row && have_carried)
      e = std::min(pending->exp, carried_exp);
    else
      e = have_row ? pending->exp : carried_exp;
    if (t.lowbit_exponent() < e)
      throw InfeasibleWidthError("finest remaining width 2^" + std::to_string(e) +
                                 " exceeds the residual width grain");

    std::vector<Item<T, X>> merged;
    if (have_row && pending->exp == e) {
      if (have_carried && carried_exp == e) {
        merged.reserve(pending->items.size() + carried.size());
        std::merge(std::make_move_iterator(pending->items.begin()),
                   std::make_move_iterator(pending->items.end()),
                   std::make_move_iterator(carried.begin()),
                   std::make_move_iterator(carried.end()), std::back_inserter(merged),
                   tie_less<T, X>);
        carried.clear();
      } else {
        merged = std::move(pending->items);
      }
      pending = next_row();
      if (pending && pending->exp <= e)
        throw InvalidParameterError("rows must arrive in ascending width order");
    } else {
      merged = std::move(carried);
      carried.clear();
    }

    if (stats) stats->node_touches += merged.size();

    std::size_t base = 0;
    if (t.bit_at(e)) {
      if (merged.empty())
        throw InfeasibleWidthError("no coin available for the 2^" + std::to_string(e) +
                                   " component");
      pol.choose(merged.front());
      t -= Dyadic::pow2(e);
      base = 1;
    }
    std::vector<Item<T, X>> next;
    next.reserve((merged.size() - base) / 2);
    for (std::size_t i = base; i + 1 < merged.size(); i += 2) {
      Item<T, X> pkg{merged[i].weight + merged[i + 1].weight, seq++, true,
                     pol.combine(merged[i].extra, merged[i + 1].extra)};
      next.push_back(std::move(pkg));
    }
    if (stats) {
      stats->packages_formed += next.size();
      stats->observe_live(merged.size() + next.size() + pol.live_overhead());
    }
    carried = std::move(next);
    carried_exp = e + 1;
  }
}

// Payload policy: tracks which atoms make up each package through an arena of
// pair nodes, so a chosen package can be expanded into atom ids.
template <class T>
struct PayloadPolicy {
  // extra >= 0: arena index of a pair; extra < 0: atom id -(extra + 1).
  std::vector<std::pair<int, int>> arena;
  std::vector<int> picked;

  static int atom_ref(int id) { return -(id + 1); }

  int combine(int a, int b) {
    arena.emplace_back(a, b);
    return static_cast<int>(arena.size()) - 1;
  }
  void choose(const Item<T, int>& item) { picked.push_back(item.extra); }

  // Arena entries stay live for the whole run, so they count toward the
  // solver's record footprint.
  std::size_t live_overhead() const { return arena.size() + picked.size(); }

  void expand(std::vector<int>& out) const {
    std::vector<int> stack(picked.begin(), picked.end());
    while (!stack.empty()) {
      int r = stack.back();
      stack.pop_back();
      if (r < 0) {
        out.push_back(-(r + 1));
      } else {
        stack.push_back(arena[static_cast<std::size_t>(r)].first);
        stack.push_back(arena[static_cast<std::size_t>(r)].second);
      }
    }
  }
};

}  // namespace pmcore

namespace detail {

template <class T>
struct IndexedCoin {
  int exp;
  T weight;
  int id;
};

template <class T>
CoinSolution<T> solve_rows(std::vector<pmcore::Row<T, int>> rows,
                           const std::vector<Coin<T>>& items, const Dyadic& t,
                           SolveStats* stats) {
  pmcore::PayloadPolicy<T> pol;
  pol.arena.reserve(items.size());
  std::size_t cursor = 0;
  auto provider = [&]() -> std::optional<pmcore::Row<T, int>> {
    if (cursor >= rows.size()) return std::nullopt;
    return std::move(rows[cursor++]);
  };
  pmcore::run<T, int>(provider, t, pol, stats);
  CoinSolution<T> sol;
  pol.expand(sol.chosen);
  std::sort(sol.chosen.begin(), sol.chosen.end());
  for (int id : sol.chosen) {
    sol.total_weight += items[static_cast<std::size_t>(id)].weight;
    sol.total_width += items[static_cast<std::size_t>(id)].width;
  }
  if (sol.total_width != t)
    throw InternalConsistencyError("selected width disagrees with the request");
  return sol;
}

}  // namespace detail

// Solves the dyadic-width coin collector problem: the minimum-weight subset
// of coins whose widths sum to exactly t. Sorting into width classes happens
// here; see package_merge_presorted for the linear-time path.
template <class T>
CoinSolution<T> package_merge(const std::vector<Coin<T>>& items, const Dyadic& t,
                              SolveStats* stats = nullptr) {
  if (t.is_negative()) throw InvalidParameterError("total width must be nonnegative");
  if (t.is_zero()) return CoinSolution<T>{};
  std::vector<detail::IndexedCoin<T>> v;
  v.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& c = items[i];
    if (c.width.is_zero() || c.width.is_negative() || !c.width.is_power_of_two())
      throw InvalidParameterError("coin widths must be exact powers of two");
    v.push_back({c.width.exponent(), c.weight, static_cast<int>(i)});
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.exp != b.exp) return a.exp < b.exp;
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.id > b.id;
  });
  std::vector<pmcore::Row<T, int>> rows;
  for (const auto& c : v) {
    if (rows.empty() || rows.back().exp != c.exp) rows.push_back({c.exp, {}});
    rows.back().items.push_back(
        {c.weight, -static_cast<long long>(c.id), false, pmcore::PayloadPolicy<T>::atom_ref(c.id)});
  }
  return detail::solve_rows(std::move(rows), items, t, stats);
}

// A width class for the presorted interface: coins of width 2^width_exp,
// already in tie order (weight ascending, ties by original id descending).
template <class T>
struct CoinRow {
  int width_exp;
  std::vector<std::pair<T, int>> coins;  // (weight, id)
};

// Identical output to package_merge, in time linear in the total coin count.
// Rows must be presorted; violations are rejected, not repaired.
template <class T>
CoinSolution<T> package_merge_presorted(const std::vector<CoinRow<T>>& given,
                                        const std::vector<Coin<T>>& items, const Dyadic& t,
                                        SolveStats* stats = nullptr) {
  if (t.is_negative()) throw InvalidParameterError("total width must be nonnegative");
  if (t.is_zero()) return CoinSolution<T>{};
  std::vector<pmcore::Row<T, int>> rows;
  rows.reserve(given.size());
  for (std::size_t r = 0; r < given.size(); ++r) {
    if (r > 0 && given[r].width_exp <= given[r - 1].width_exp)
      throw InvalidParameterError("rows must be in strictly ascending width order");
    pmcore::Row<T, int> row{given[r].width_exp, {}};
    row.items.reserve(given[r].coins.size());
    for (const auto& [w, id] : given[r].coins) {
      pmcore::Item<T, int> it{w, -static_cast<long long>(id), false,
                              pmcore::PayloadPolicy<T>::atom_ref(id)};
      if (!row.items.empty() && tie_less(it, row.items.back()))
        throw InvalidParameterError("row " + std::to_string(r) + " is not in tie order");
      row.items.push_back(std::move(it));
    }
    rows.push_back(std::move(row));
  }
  return detail::solve_rows(std::move(rows), items, t, stats);
}

}  // namespace qac
