#pragma once

// Types (compositions of n into q parts), type classes, ranking of vectors
// inside a type class, and the mixed-radix bijection [N]^l <-> [N^l].
//
// Canonical type order: lexicographically decreasing, so for n=3, q=2 the
// types are (3,0),(2,1),(1,2),(0,3). Type indices are 0-based positions in
// that order. Word symbols are 1..q.

#include "permid/core.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace permid {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

struct TypeVector {
  std::vector<std::uint32_t> counts;

  std::uint32_t length() const {
    std::uint64_t s = 0;
    for (auto c : counts) s += c;
    return static_cast<std::uint32_t>(s);
  }
  std::uint32_t alphabet() const { return static_cast<std::uint32_t>(counts.size()); }

  auto operator<=>(const TypeVector&) const = default;
};

/// 0-based position of a type in the canonical order.
struct TypeIndex {
  std::uint64_t value = 0;
  auto operator<=>(const TypeIndex&) const = default;
};

inline void check_nq(std::uint64_t n, std::uint64_t q) {
  require(n >= 1, "combinatorics", "block length n must be >= 1");
  require(q >= 2 && q <= 255, "combinatorics", "alphabet size q must be in [2, 255]");
}

/// N = C(n+q-1, q-1).
inline BigInt count_types(std::uint64_t n, std::uint64_t q) {
  check_nq(n, q);
  return binomial(n + q - 1, q - 1);
}

/// All types in canonical order. Throws overflow when N cannot be materialised.
inline std::vector<TypeVector> enumerate_types(std::uint32_t n, std::uint32_t q, std::uint64_t limit = 1ULL << 26) {
  const BigInt total = count_types(n, q);
  if (!fits_u64(total) || to_u64(total, "combinatorics", "N") > limit)
    fail("combinatorics", errc::overflow, "type count N = " + total.get_str() + " exceeds enumeration limit");
  std::vector<TypeVector> out;
  out.reserve(to_u64(total, "combinatorics", "N"));
  std::vector<std::uint32_t> cur(q, 0);
  cur[0] = n;
  for (;;) {
    out.push_back(TypeVector{cur});
    // Successor in decreasing-lex order: take one unit from the rightmost
    // nonzero entry among the first q-1 and move it, with the tail, one step right.
    std::int64_t k = static_cast<std::int64_t>(q) - 2;
    while (k >= 0 && cur[k] == 0) --k;
    if (k < 0) break;
    std::uint32_t tail = cur[q - 1];
    cur[q - 1] = 0;
    --cur[k];
    cur[k + 1] = tail + 1;
  }
  return out;
}

/// Exact rational bounds on N: n^(q-1)/(q-1)! <= N <= that*(1+(q-1)/n)^(q-1),
/// and N <= (2n)^(q-1) whenever n >= q-1.
struct NBoundsCheck {
  bool lower = false;
  bool upper = false;
  std::optional<bool> loose_upper;
  BigInt N;
  Rational lower_value;
  Rational upper_value;

  bool all() const { return lower && upper && loose_upper.value_or(true); }
};

inline NBoundsCheck check_N_bounds(std::uint32_t n, std::uint32_t q) {
  NBoundsCheck out;
  out.N = count_types(n, q);
  out.lower_value = Rational(pow(BigInt(n), q - 1), factorial(q - 1));
  out.lower_value.canonicalize();
  Rational growth(BigInt(n + q - 1), BigInt(n));
  growth.canonicalize();
  out.upper_value = out.lower_value * pow(growth, q - 1);
  out.lower = out.lower_value <= Rational(out.N);
  out.upper = Rational(out.N) <= out.upper_value;
  if (n >= q - 1) out.loose_upper = out.N <= pow(BigInt(2 * static_cast<std::uint64_t>(n)), q - 1);
  return out;
}

inline void check_type(const TypeVector& t) {
  require(t.counts.size() >= 2 && t.counts.size() <= 255, "combinatorics", "type must have q in [2,255] entries");
  require(t.length() >= 1, "combinatorics", "type must have positive length");
}

/// Multinomial n! / prod(counts!).
inline BigInt typeclass_size(const TypeVector& t) {
  check_type(t);
  BigInt r = 1;
  std::uint64_t placed = 0;
  for (auto c : t.counts) {
    placed += c;
    r *= binomial(placed, c);
  }
  return r;
}

inline TypeVector type_of(std::span<const Symbol> x, std::uint32_t q) {
  require(q >= 2 && q <= 255, "combinatorics", "alphabet size q must be in [2, 255]");
  TypeVector t{std::vector<std::uint32_t>(q, 0)};
  for (Symbol s : x) {
    if (s < 1 || s > q)
      fail("combinatorics", errc::precondition, "symbol " + std::to_string(s) + " outside alphabet [1.." + std::to_string(q) + "]");
    ++t.counts[s - 1];
  }
  return t;
}

/// Position of t in the canonical order, via the hockey-stick identity.
inline TypeIndex type_rank(const TypeVector& t) {
  check_type(t);
  const std::uint64_t q = t.counts.size();
  std::uint64_t remaining = t.length();
  BigInt rank = 0;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    const std::uint64_t c = t.counts[k];
    const std::uint64_t parts = q - k - 1;
    // compositions whose k-th entry exceeds c
    if (c < remaining) rank += binomial(remaining - c - 1 + parts, parts);
    remaining -= c;
  }
  return TypeIndex{to_u64(rank, "combinatorics", "type index")};
}

/// Lexicographically smallest word of the class (the canonical representative).
inline Word representative(const TypeVector& t) {
  check_type(t);
  Word w;
  w.reserve(t.length());
  for (std::size_t s = 0; s < t.counts.size(); ++s) w.insert(w.end(), t.counts[s], static_cast<Symbol>(s + 1));
  return w;
}

namespace detail {

template <class Int>
Int multinomial_of(const std::vector<std::uint32_t>& counts) {
  BigInt r = 1;
  std::uint64_t placed = 0;
  for (auto c : counts) {
    placed += c;
    r *= binomial(placed, c);
  }
  if constexpr (std::is_same_v<Int, BigInt>) {
    return r;
  } else {
    return to_u64(r, "combinatorics", "typeclass size");
  }
}

inline std::uint64_t mul_div(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b / c);
}
inline BigInt mul_div(const BigInt& a, std::uint64_t b, std::uint64_t c) { return a * b / c; }

}  // namespace detail

/// Lexicographic rank of x inside its type class (0-based). Int is std::uint64_t
/// when the class size fits, BigInt otherwise.
template <class Int = BigInt>
Int rank_in_class(std::span<const Symbol> x, std::uint32_t q) {
  TypeVector t = type_of(x, q);
  Int remaining_classes = detail::multinomial_of<Int>(t.counts);  // words with the current suffix multiset
  Int rank = 0;
  std::uint64_t len = x.size();
  for (Symbol sym : x) {
    const std::size_t s = sym - 1;
    for (std::size_t smaller = 0; smaller < s; ++smaller) {
      if (t.counts[smaller] == 0) continue;
      rank += detail::mul_div(remaining_classes, t.counts[smaller], len);
    }
    remaining_classes = detail::mul_div(remaining_classes, t.counts[s], len);
    --t.counts[s];
    --len;
  }
  return rank;
}

template <class Int = BigInt>
Word unrank_in_class(const TypeVector& t, Int rank) {
  check_type(t);
  auto counts = t.counts;
  Int remaining_classes = detail::multinomial_of<Int>(counts);
  if (!(rank < remaining_classes)) fail("combinatorics", errc::precondition, "rank outside type class");
  std::uint64_t len = t.length();
  Word out;
  out.reserve(len);
  while (len > 0) {
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] == 0) continue;
      Int block = detail::mul_div(remaining_classes, counts[s], len);
      if (rank < block) {
        out.push_back(static_cast<Symbol>(s + 1));
        remaining_classes = block;
        --counts[s];
        break;
      }
      rank -= block;
    }
    --len;
  }
  return out;
}

/// Table of all types of length n over [q] with their class sizes.
class TypeSpace {
 public:
  TypeSpace(std::uint32_t n, std::uint32_t q) : n_(n), q_(q), types_(enumerate_types(n, q)) {
    sizes_.reserve(types_.size());
    for (const auto& t : types_) sizes_.push_back(typeclass_size(t));
  }

  std::uint32_t n() const { return n_; }
  std::uint32_t q() const { return q_; }
  std::uint64_t size() const { return types_.size(); }
  const std::vector<TypeVector>& types() const { return types_; }
  const TypeVector& type(std::uint64_t j) const { return types_.at(j); }
  const BigInt& class_size(std::uint64_t j) const { return sizes_.at(j); }
  Word representative(std::uint64_t j) const { return permid::representative(types_.at(j)); }

  std::uint64_t index_of(const TypeVector& t) const {
    if (t.length() != n_ || t.alphabet() != q_) fail("combinatorics", errc::mismatch, "type has wrong length or alphabet");
    return type_rank(t).value;
  }
  std::uint64_t index_of(std::span<const Symbol> x) const {
    if (x.size() != n_) fail("combinatorics", errc::mismatch, "word length differs from n");
    return type_rank(type_of(x, q_)).value;
  }

 private:
  std::uint32_t n_;
  std::uint32_t q_;
  std::vector<TypeVector> types_;
  std::vector<BigInt> sizes_;
};

/// Positional base-N code: (j_1,...,j_l) -> j_1 N^(l-1) + ... + j_l, all 0-based.
class MixedRadix {
 public:
  MixedRadix(std::uint64_t radix, std::uint32_t digits) : radix_(radix), digits_(digits) {
    require(radix >= 1, "combinatorics", "radix must be >= 1");
    require(digits >= 1, "combinatorics", "digit count must be >= 1");
    BigInt t = pow(big(radix), digits);
    if (!fits_u64(t) || t > big(std::numeric_limits<std::uint64_t>::max() >> 1))
      fail("combinatorics", errc::overflow, "N^l = " + t.get_str() + " overflows");
    total_ = to_u64(t, "combinatorics", "N^l");
  }

  std::uint64_t radix() const { return radix_; }
  std::uint32_t digits() const { return digits_; }
  std::uint64_t total() const { return total_; }

  std::uint64_t encode(std::span<const std::uint64_t> tuple) const {
    if (tuple.size() != digits_) fail("combinatorics", errc::mismatch, "tuple length differs from l");
    std::uint64_t v = 0;
    for (auto j : tuple) {
      if (j >= radix_) fail("combinatorics", errc::precondition, "tuple entry outside [N]");
      v = v * radix_ + j;
    }
    return v;
  }

  std::vector<std::uint64_t> decode(std::uint64_t v) const {
    if (v >= total_) fail("combinatorics", errc::precondition, "value outside [N^l]");
    std::vector<std::uint64_t> out(digits_);
    for (std::uint32_t k = digits_; k-- > 0;) {
      out[k] = v % radix_;
      v /= radix_;
    }
    return out;
  }

 private:
  std::uint64_t radix_;
  std::uint32_t digits_;
  std::uint64_t total_ = 0;
};

}  // namespace permid
