// Seeded deterministic randomness. splitmix64 with rejection sampling,
// so the same seed gives the same stream on every platform.
#pragma once

#include <cstdint>

namespace aggsig {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [1, n).
  std::uint64_t nonzero_below(std::uint64_t n) { return 1 + below(n - 1); }

 private:
  std::uint64_t state_;
};

}  // namespace aggsig
