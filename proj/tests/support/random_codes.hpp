#pragma once

// Random code generators and a brute-force evaluator used as an independent
// oracle by the unit and acceptance tests.

#include "permid/channel.hpp"
#include "permid/idcode.hpp"
#include "permid/rng.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace permid::testing {

inline Dist random_dist(std::uint64_t N, RngStream& rng, std::uint64_t max_support = 0, std::uint64_t max_weight = 9) {
  if (max_support == 0 || max_support > N) max_support = N;
  const auto s = 1 + rng.uniform(max_support);
  std::vector<std::uint64_t> idx(N);
  for (std::uint64_t k = 0; k < N; ++k) idx[k] = k;
  for (std::uint64_t k = 0; k < s; ++k) std::swap(idx[k], idx[k + rng.uniform(N - k)]);
  std::vector<std::uint64_t> w(N, 0);
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k < s; ++k) total += w[idx[k]] = 1 + rng.uniform(max_weight);
  std::vector<Rational> p(N);
  for (std::uint64_t k = 0; k < N; ++k) p[k] = Rational(big(w[k]), big(total));
  return Dist(std::move(p));
}

inline Rational random_prob(RngStream& rng) {
  switch (rng.uniform(4)) {
    case 0: return Rational(0);
    case 1: return Rational(1);
    default: {
      const auto den = 1 + rng.uniform(12);
      Rational r(big(rng.uniform(den + 1)), big(den));
      r.canonicalize();
      return r;
    }
  }
}

inline NoiselessIdCode random_noiseless(std::uint64_t N, std::uint64_t M, bool stochastic, RngStream& rng,
                                        std::uint64_t max_support = 0) {
  std::vector<Dist> enc;
  for (std::uint64_t i = 0; i < M; ++i) enc.push_back(random_dist(N, rng, max_support));
  if (stochastic) {
    std::vector<std::vector<Rational>> acc(M, std::vector<Rational>(N));
    for (auto& row : acc)
      for (auto& a : row) a = random_prob(rng);
    return NoiselessIdCode::make_stochastic(N, std::move(enc), std::move(acc));
  }
  std::vector<std::vector<std::uint64_t>> dec(M);
  for (auto& d : dec)
    for (std::uint64_t k = 0; k < N; ++k)
      if (rng.uniform(2)) d.push_back(k);
  return NoiselessIdCode::make_deterministic(N, std::move(enc), dec);
}

/// Uniform code on random supports with deterministic decoders.
inline NoiselessIdCode random_uniform_code(std::uint64_t N, std::uint64_t M, RngStream& rng) {
  std::vector<Dist> enc;
  std::vector<std::vector<std::uint64_t>> dec(M);
  for (std::uint64_t i = 0; i < M; ++i) {
    std::vector<std::uint64_t> s;
    while (s.empty())
      for (std::uint64_t k = 0; k < N; ++k)
        if (rng.uniform(3) == 0) s.push_back(k);
    enc.push_back(Dist::uniform_on(N, s));
    for (std::uint64_t k = 0; k < N; ++k)
      if (rng.uniform(2)) dec[i].push_back(k);
  }
  return NoiselessIdCode::make_deterministic(N, std::move(enc), dec);
}

inline Word random_word(std::size_t len, std::uint32_t q, RngStream& rng) {
  Word w(len);
  for (auto& s : w) s = static_cast<Symbol>(1 + rng.uniform(q));
  return w;
}

inline std::vector<Word> all_words(std::size_t len, std::uint32_t q) {
  std::vector<Word> out;
  Word w(len, 1);
  for (;;) {
    out.push_back(w);
    std::size_t k = 0;
    while (k < len && w[len - 1 - k] == q) w[len - 1 - k++] = 1;
    if (k == len) break;
    ++w[len - 1 - k];
  }
  return out;
}

inline WordDist random_word_dist(std::size_t len, std::uint32_t q, RngStream& rng, std::uint64_t max_atoms = 4) {
  std::vector<std::pair<Word, Rational>> atoms;
  const auto count = 1 + rng.uniform(max_atoms);
  std::uint64_t total = 0;
  std::vector<std::uint64_t> w;
  for (std::uint64_t k = 0; k < count; ++k) {
    w.push_back(1 + rng.uniform(9));
    total += w.back();
  }
  for (std::uint64_t k = 0; k < count; ++k) atoms.emplace_back(random_word(len, q, rng), Rational(big(w[k]), big(total)));
  return WordDist(std::move(atoms));
}

/// Random permutation-channel code with explicit decoder sets.
inline PermIdCode random_perm_code(std::uint32_t n, std::uint32_t q, std::uint32_t l, std::uint64_t M, RngStream& rng) {
  const auto words = all_words(static_cast<std::size_t>(n) * l, q);
  std::vector<WordDist> enc;
  std::vector<std::vector<Word>> sets(M);
  for (std::uint64_t i = 0; i < M; ++i) {
    enc.push_back(random_word_dist(static_cast<std::size_t>(n) * l, q, rng));
    const auto density = 1 + rng.uniform(4);  // inclusion probability density/5
    for (const auto& w : words)
      if (rng.uniform(5) < density) sets[i].push_back(w);
  }
  return PermIdCode::from_sets(n, q, l, std::move(enc), std::move(sets));
}

/// Random permutation-channel code given only by acceptance counts.
inline PermIdCode random_count_code(std::uint32_t n, std::uint32_t q, std::uint64_t M, RngStream& rng) {
  PermIdCode c;
  c.n = n;
  c.q = q;
  const TypeSpace space(n, q);
  for (std::uint64_t i = 0; i < M; ++i) {
    c.encoders.push_back(random_word_dist(n, q, rng));
    std::vector<BigInt> counts;
    for (std::uint64_t j = 0; j < space.size(); ++j) {
      const auto& size = space.class_size(j);
      switch (rng.uniform(3)) {
        case 0: counts.push_back(0); break;
        case 1: counts.push_back(size); break;
        default: counts.push_back(rng.uniform(size + 1));
      }
    }
    c.accept_counts.push_back(std::move(counts));
  }
  c.validate();
  return c;
}

/// Brute force over every channel output: sum_x Q_i(x) sum_{y in D_j} prod_b Pi(y_b | x_b).
inline ErrorReport eval_perm_bruteforce(const PermIdCode& code) {
  if (!code.decoder_sets) throw std::logic_error("brute-force evaluation needs explicit decoder sets");
  const PermutationChannel ch(code.n, code.q);
  const auto len = static_cast<std::size_t>(code.n) * code.l;
  const auto outputs = all_words(len, code.q);
  std::vector<std::set<Word>> sets;
  for (const auto& s : *code.decoder_sets) sets.emplace_back(s.begin(), s.end());
  ErrorReport r;
  r.M = code.M();
  r.matrix.emplace(r.M, std::vector<Rational>(r.M));
  r.missed.emplace(r.M);
  for (std::uint64_t i = 0; i < r.M; ++i)
    for (std::uint64_t j = 0; j < r.M; ++j) {
      Rational accepted = 0;
      for (const auto& [x, p] : code.encoders[i].atoms())
        for (const auto& y : outputs) {
          if (!sets[j].count(y)) continue;
          Rational law = 1;
          for (std::uint32_t b = 0; b < code.l; ++b) {
            std::span<const Symbol> xb(x.data() + b * code.n, code.n);
            std::span<const Symbol> yb(y.data() + b * code.n, code.n);
            law *= ch.transition_prob(xb, yb);
          }
          accepted += p * law;
        }
      if (i == j) {
        (*r.missed)[i] = 1 - accepted;
        r.lambda1 = std::max(r.lambda1, (*r.missed)[i]);
      } else {
        (*r.matrix)[i][j] = accepted;
        r.lambda2 = std::max(r.lambda2, accepted);
      }
    }
  r.lambda = r.lambda1 + r.lambda2;
  return r;
}

}  // namespace permid::testing
