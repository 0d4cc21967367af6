#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace floodpulse::rng {

/// Seeded generator with explicit sampling algorithms so results depend only
/// on the seed, never on standard-library distribution internals.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform double in [0, 1).
  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    const auto i = std::size_t(uniform01() * double(n));
    return i < n ? i : n - 1;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Knuth's product method, chunked so large means stay in range of exp().
  long poisson(double lambda) {
    long total = 0;
    while (lambda > 30.0) {
      total += poisson_small(30.0);
      lambda -= 30.0;
    }
    return total + poisson_small(lambda);
  }

 private:
  long poisson_small(double lambda) {
    if (lambda <= 0) return 0;
    const double limit = std::exp(-lambda);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 eng_;
};

}  // namespace floodpulse::rng
