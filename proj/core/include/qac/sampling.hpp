#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qac {

// Deterministic sampling helpers. std::mt19937_64 is fully specified, but the
// standard distributions are not; drawing through these shims keeps every
// sampled value bit-identical across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t bits() { return rng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi] by rejection-free modulo on a wide range;
  // bias is negligible for the small ranges used here and, more importantly,
  // the result is identical everywhere.
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double exponential() { return -std::log1p(-uniform01()); }

  // Symmetric Dirichlet(1): normalized unit exponentials.
  std::vector<double> dirichlet(int n) {
    std::vector<double> p(n);
    double sum = 0;
    for (auto& v : p) {
      v = exponential();
      sum += v;
    }
    for (auto& v : p) v /= sum;
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qac
