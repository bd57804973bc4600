#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "qac/errors.hpp"
#include "qac/numeric.hpp"

namespace qac {

inline constexpr double kNormalizationTolerance = 1e-9;

// A source with positive symbol weights in (0, 1], stored nonincreasing.
// Callers with unsorted input use sort_weights() and keep the permutation.
template <class T>
class SourceDistribution {
 public:
  explicit SourceDistribution(std::vector<T> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw InvalidParameterError("a source needs at least one symbol");
    T sum{};
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!(w_[i] > T(0))) throw InvalidParameterError("symbol weights must be positive");
      if (w_[i] > T(1)) throw InvalidParameterError("symbol weights must not exceed 1");
      if (i > 0 && w_[i] > w_[i - 1])
        throw InvalidParameterError("weights must be sorted nonincreasing");
      sum += w_[i];
    }
    normalized_ = std::abs(to_double(sum) - 1.0) <= kNormalizationTolerance;
  }

  int size() const { return static_cast<int>(w_.size()); }
  const T& operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<T>& weights() const { return w_; }
  bool normalized() const { return normalized_; }

 private:
  std::vector<T> w_;
  bool normalized_ = false;
};

// Sorts weights nonincreasing, stably, so equal weights keep input order.
// Returns the sorted weights and a permutation p with sorted[k] = input[p[k]].
template <class T>
std::pair<std::vector<T>, std::vector<int>> sort_weights(const std::vector<T>& input) {
  std::vector<int> perm(input.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return input[b] < input[a]; });
  std::vector<T> sorted;
  sorted.reserve(input.size());
  for (int i : perm) sorted.push_back(input[i]);
  return {std::move(sorted), std::move(perm)};
}

}  // namespace qac
