#pragma once

// Exact-rational probability distributions.

#include "permid/combinatorics.hpp"
#include "permid/core.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace permid {

/// Distribution over {0, ..., size-1}; every mass is an exact rational.
class Dist {
 public:
  Dist() = default;

  explicit Dist(std::vector<Rational> probs) : p_(std::move(probs)) {
    Rational total = 0;
    for (auto& v : p_) {
      v.canonicalize();
      if (sgn(v) < 0) fail("dist", errc::invariant, "negative probability " + to_pq(v));
      total += v;
    }
    if (total != 1) fail("dist", errc::invariant, "probabilities sum to " + to_pq(total) + ", not 1");
  }

  static Dist point(std::uint64_t size, std::uint64_t at) {
    require(at < size, "dist", "point mass outside ground set");
    std::vector<Rational> p(size);
    p[at] = 1;
    return Dist(std::move(p));
  }

  static Dist uniform_on(std::uint64_t size, std::span<const std::uint64_t> support) {
    require(!support.empty(), "dist", "uniform distribution needs a nonempty support");
    std::vector<Rational> p(size);
    const Rational mass(1, support.size());
    for (auto k : support) {
      require(k < size, "dist", "support element outside ground set");
      if (sgn(p[k]) != 0) fail("dist", errc::precondition, "repeated support element");
      p[k] = mass;
    }
    return Dist(std::move(p));
  }

  std::uint64_t size() const { return p_.size(); }
  const Rational& operator[](std::uint64_t k) const { return p_[k]; }
  const std::vector<Rational>& probs() const { return p_; }

  std::vector<std::uint64_t> support() const {
    std::vector<std::uint64_t> s;
    for (std::uint64_t k = 0; k < p_.size(); ++k)
      if (sgn(p_[k]) > 0) s.push_back(k);
    return s;
  }

  Rational mass(std::span<const std::uint64_t> subset) const {
    Rational m = 0;
    for (auto k : subset) m += p_.at(k);
    return m;
  }

  bool is_uniform_on_support() const {
    const Rational* first = nullptr;
    for (const auto& v : p_) {
      if (sgn(v) == 0) continue;
      if (first == nullptr) first = &v;
      else if (v != *first) return false;
    }
    return true;
  }

  bool operator==(const Dist& other) const { return p_ == other.p_; }

 private:
  std::vector<Rational> p_;
};

/// Sparse distribution over q-ary words (one-shot or l-block).
class WordDist {
 public:
  WordDist() = default;

  explicit WordDist(std::vector<std::pair<Word, Rational>> atoms) {
    std::map<Word, Rational> merged;
    for (auto& [w, p] : atoms) {
      p.canonicalize();
      if (sgn(p) < 0) fail("dist", errc::invariant, "negative probability " + to_pq(p));
      if (sgn(p) == 0) continue;
      merged[w] += p;
    }
    Rational total = 0;
    for (auto& [w, p] : merged) {
      total += p;
      atoms_.emplace_back(w, p);
    }
    if (total != 1) fail("dist", errc::invariant, "word probabilities sum to " + to_pq(total) + ", not 1");
  }

  static WordDist uniform(std::vector<Word> words) {
    require(!words.empty(), "dist", "uniform distribution needs a nonempty support");
    const Rational mass(1, words.size());
    std::vector<std::pair<Word, Rational>> atoms;
    atoms.reserve(words.size());
    for (auto& w : words) atoms.emplace_back(std::move(w), mass);
    WordDist d(std::move(atoms));
    if (d.atoms_.size() != words.size())
      fail("dist", errc::precondition, "repeated word in uniform support");
    return d;
  }

  const std::vector<std::pair<Word, Rational>>& atoms() const { return atoms_; }
  bool operator==(const WordDist& other) const { return atoms_ == other.atoms_; }

 private:
  std::vector<std::pair<Word, Rational>> atoms_;  // sorted by word, positive masses
};

}  // namespace permid
