#pragma once

// The n-block q-ary uniform permutation channel and the noiseless channel.
//
// The output of the permutation channel is uniform on the type class (orbit)
// of the input, so the law is evaluated through class sizes instead of a sum
// over all n! permutations.

#include "permid/combinatorics.hpp"
#include "permid/core.hpp"
#include "permid/dist.hpp"
#include "permid/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace permid {

class PermutationChannel {
 public:
  PermutationChannel(std::uint32_t n, std::uint32_t q) : n_(n), q_(q) { check_nq(n, q); }

  std::uint32_t n() const { return n_; }
  std::uint32_t q() const { return q_; }

  void check_word(std::span<const Symbol> x) const {
    if (x.size() != n_)
      fail("channel", errc::mismatch, "word length " + std::to_string(x.size()) + " differs from n = " + std::to_string(n_));
    for (Symbol s : x)
      if (s < 1 || s > q_) fail("channel", errc::precondition, "symbol outside [1..q]");
  }

  /// Pi(y|x) = 1/|T_x| when y has the type of x, else 0.
  Rational transition_prob(std::span<const Symbol> x, std::span<const Symbol> y) const {
    check_word(x);
    check_word(y);
    if (q_ <= kSmallAlphabet) {
      // allocation-free type comparison; this sits in exhaustive output loops
      std::array<std::int32_t, kSmallAlphabet + 1> diff{};
      for (std::size_t k = 0; k < x.size(); ++k) {
        ++diff[x[k]];
        --diff[y[k]];
      }
      for (std::uint32_t s = 1; s <= q_; ++s)
        if (diff[s] != 0) return Rational(0);
      return Rational(BigInt(1), typeclass_size(type_of(x, q_)));
    }
    const TypeVector tx = type_of(x, q_);
    if (tx != type_of(y, q_)) return Rational(0);
    return Rational(BigInt(1), typeclass_size(tx));
  }

  /// Uniform draw from the type class of x: a uniform rank, then unrank.
  Word sample_output(std::span<const Symbol> x, RngStream& rng) const {
    check_word(x);
    const TypeVector t = type_of(x, q_);
    const BigInt size = typeclass_size(t);
    if (fits_u64(size)) return unrank_in_class<std::uint64_t>(t, rng.uniform(to_u64(size, "channel", "class size")));
    return unrank_in_class<BigInt>(t, rng.uniform(size));
  }

  /// Law of the output type when the input is drawn from `encoder`.
  Dist output_type_dist(const WordDist& encoder) const {
    const std::uint64_t N = to_u64(count_types(n_, q_), "channel", "N");
    std::vector<Rational> mass(N);
    for (const auto& [w, p] : encoder.atoms()) {
      check_word(w);
      mass[type_rank(type_of(w, q_)).value] += p;
    }
    return Dist(std::move(mass));
  }

 private:
  static constexpr std::uint32_t kSmallAlphabet = 32;
  std::uint32_t n_;
  std::uint32_t q_;
};

/// NL_[N]: output equals input.
class NoiselessChannel {
 public:
  explicit NoiselessChannel(std::uint64_t size) : size_(size) { require(size >= 1, "channel", "N must be >= 1"); }
  std::uint64_t size() const { return size_; }
  Rational transition_prob(std::uint64_t x, std::uint64_t y) const {
    require(x < size_ && y < size_, "channel", "symbol outside [N]");
    return Rational(x == y ? 1 : 0);
  }

 private:
  std::uint64_t size_;
};

/// Index in [N^l] of the per-block type tuple of an l-block word.
inline std::uint64_t block_type_index(std::span<const Symbol> word, std::uint32_t n, std::uint32_t q, const MixedRadix& radix) {
  if (word.size() != static_cast<std::size_t>(n) * radix.digits())
    fail("channel", errc::mismatch, "word length differs from n*l");
  std::uint64_t v = 0;
  for (std::uint32_t b = 0; b < radix.digits(); ++b) {
    const std::uint64_t j = type_rank(type_of(word.subspan(static_cast<std::size_t>(b) * n, n), q)).value;
    v = v * radix.radix() + j;
  }
  return v;
}

}  // namespace permid
