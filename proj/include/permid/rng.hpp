#pragma once

// Seedable, splittable random streams. Every stochastic operation in permid
// takes an explicit RngStream so results are reproducible from one root seed.

#include "permid/core.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace permid {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(detail::splitmix64(seed)) {}

  /// Stream for (root, label); stable across runs, platforms and worker counts.
  static RngStream derive(std::uint64_t root, std::string_view label) {
    return RngStream(detail::splitmix64(root ^ detail::fnv1a(label)));
  }

  /// Child stream; does not advance this stream.
  RngStream split(std::string_view label) const { return derive(seed_, label); }
  RngStream split(std::uint64_t index) const {
    return RngStream(detail::splitmix64(seed_ ^ detail::splitmix64(index + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound) by rejection; bound must be positive.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) fail("rng", errc::precondition, "uniform bound must be positive");
    if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform on [0, bound) for arbitrary-precision bounds.
  BigInt uniform(const BigInt& bound) {
    if (sgn(bound) <= 0) fail("rng", errc::precondition, "uniform bound must be positive");
    if (fits_u64(bound)) return big(uniform(to_u64(bound, "rng", "bound")));
    const std::size_t bits = bit_length(bound);
    for (;;) {
      BigInt x;
      std::size_t filled = 0;
      while (filled < bits) {
        x = (x << 64) + big(next());
        filled += 64;
      }
      x >>= (filled - bits);
      if (x < bound) return x;
    }
  }

  /// Bernoulli trial with exact rational success probability num/den.
  bool bernoulli(const BigInt& num, const BigInt& den) { return uniform(den) < num; }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace permid
