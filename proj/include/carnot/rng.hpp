#pragma once

// Deterministic random/quasi-random sources. The counter RNG is stateless:
// sample i, dimension d maps to a fixed 64-bit hash of (seed, i, d), so
// parallel evaluation order cannot change a stream.

#include <cstdint>
#include <vector>

namespace carnot::rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Stateless counter-based uniform stream.
struct CounterRng {
  std::uint64_t seed = 0;

  explicit CounterRng(std::uint64_t s) : seed(s) {}

  std::uint64_t bits(std::uint64_t index, std::uint64_t dim = 0) const {
    return mix64(seed ^ mix64(index ^ mix64(dim + 0x51ed2701ull)));
  }
  double uniform(std::uint64_t index, std::uint64_t dim = 0) const {
    return to_unit(bits(index, dim));
  }
  double uniform(std::uint64_t index, std::uint64_t dim, double lo, double hi) const {
    return lo + (hi - lo) * uniform(index, dim);
  }
};

/// Small stateful generator for setup work (shuffles, ad-hoc draws).
struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
  }
  double uniform() { return to_unit(next()); }
  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = next();
      r = x % n;
    } while (x - r > std::uint64_t(-1) - n + 1);
    return r;
  }
};

inline constexpr int kHaltonPrimes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                          23, 29, 31, 37, 41, 43, 47, 53};

/// Halton sequence with seeded digit permutations (permutation fixes 0 so the
/// implicit infinite tail of zero digits stays zero).
class ScrambledHalton {
 public:
  ScrambledHalton(int dims, std::uint64_t seed) : dims_(dims) {
    SplitMix sm(mix64(seed ^ 0x48616c746f6eull));
    perms_.resize(dims_);
    for (int d = 0; d < dims_; ++d) {
      const int b = kHaltonPrimes[d % 16];
      auto& p = perms_[d];
      p.resize(b);
      for (int i = 0; i < b; ++i) p[i] = i;
      for (int i = b - 1; i >= 2; --i) {  // keep p[0] = 0
        int j = 1 + static_cast<int>(sm.below(static_cast<std::uint64_t>(i)));
        std::swap(p[i], p[j]);
      }
    }
  }

  int dims() const { return dims_; }

  double coordinate(std::int64_t index, int dim) const {
    const int b = kHaltonPrimes[dim % 16];
    const auto& p = perms_[dim];
    double x = 0.0, scale = 1.0 / b;
    std::int64_t i = index + 1;  // skip the all-zero first point
    while (i > 0) {
      x += scale * p[static_cast<int>(i % b)];
      i /= b;
      scale /= b;
    }
    return x;
  }

  std::vector<double> point(std::int64_t index) const {
    std::vector<double> out(dims_);
    for (int d = 0; d < dims_; ++d) out[d] = coordinate(index, d);
    return out;
  }

 private:
  int dims_;
  std::vector<std::vector<int>> perms_;
};

}  // namespace carnot::rng
