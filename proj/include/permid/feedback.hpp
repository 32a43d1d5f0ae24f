#pragma once

// Two-phase identification with block feedback: l-1 pilot blocks carry a
// fixed vector of the largest type class, and the permuted pilot outputs
// (known to both ends) index a random map Phi_i choosing the type sent in
// the last block.

#include "permid/channel.hpp"
#include "permid/combinatorics.hpp"
#include "permid/core.hpp"
#include "permid/idcode.hpp"
#include "permid/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace permid {

struct MaxTypeclass {
  TypeVector type;
  BigInt size;
  std::uint64_t index = 0;
  std::optional<bool> lower_bound_holds;  // q^n / (2n)^{q-1} <= size, for n >= q-1
  bool upper_bound_holds = false;         // size <= q^n
};

/// Balanced type with the larger counts first, which is the smallest index among maximizers.
inline MaxTypeclass max_typeclass(std::uint32_t n, std::uint32_t q) {
  check_nq(n, q);
  MaxTypeclass out;
  out.type.counts.assign(q, n / q);
  for (std::uint32_t s = 0; s < n % q; ++s) ++out.type.counts[s];
  out.size = typeclass_size(out.type);
  out.index = type_rank(out.type).value;
  const BigInt space = pow(BigInt(q), n);
  out.upper_bound_holds = out.size <= space;
  if (n >= q - 1) out.lower_bound_holds = space <= out.size * pow(BigInt(2 * static_cast<std::uint64_t>(n)), q - 1);
  return out;
}

inline constexpr std::uint64_t kDefaultFeedbackBudget = 1ULL << 30;  // bytes of Phi tables

struct FeedbackCode {
  std::uint32_t n = 1;
  std::uint32_t q = 2;
  std::uint32_t l = 2;
  std::uint64_t M = 0;
  std::uint64_t N = 0;                 // number of types
  std::uint64_t domain = 0;            // |T_{P*}|^{l-1}
  Word pilot;                          // x*
  std::optional<std::uint64_t> seed;
  std::vector<std::uint32_t> phi;      // M x domain, type indices in [0, N)

  std::uint32_t at(std::uint64_t i, std::uint64_t r) const { return phi[i * domain + r]; }
  const std::uint32_t* row(std::uint64_t i) const { return phi.data() + i * domain; }

  void validate() const {
    check_nq(n, q);
    require(l >= 2, "feedback", "feedback scheme needs l >= 2");
    require(M >= 1, "feedback", "code needs at least one message");
    const auto star = max_typeclass(n, q);
    if (type_of(pilot, q) != star.type) fail("feedback", errc::invariant, "pilot is not of the largest type");
    if (N != to_u64(count_types(n, q), "feedback", "N")) fail("feedback", errc::invariant, "N differs from the type count");
    if (big(domain) != pow(star.size, l - 1)) fail("feedback", errc::invariant, "domain differs from |T*|^(l-1)");
    if (phi.size() != M * domain) fail("feedback", errc::mismatch, "Phi table has wrong size");
    for (auto v : phi)
      if (v >= N) fail("feedback", errc::invariant, "Phi entry outside [N]");
  }
};

/// Size of the Phi tables in bytes, or nullopt when it does not even fit 64 bits.
inline std::optional<std::uint64_t> feedback_table_bytes(std::uint32_t n, std::uint32_t q, std::uint32_t l, std::uint64_t M) {
  const BigInt bytes = pow(max_typeclass(n, q).size, l - 1) * big(M) * sizeof(std::uint32_t);
  if (!fits_u64(bytes)) return std::nullopt;
  return to_u64(bytes, "feedback", "bytes");
}

inline FeedbackCode build_feedback_code(std::uint32_t n, std::uint32_t q, std::uint32_t l, std::uint64_t M, RngStream& rng,
                                        std::uint64_t budget_bytes = kDefaultFeedbackBudget) {
  check_nq(n, q);
  require(l >= 2, "feedback", "feedback scheme needs l >= 2");
  require(M >= 1, "feedback", "code needs at least one message");
  const auto bytes = feedback_table_bytes(n, q, l, M);
  if (!bytes || *bytes > budget_bytes)
    fail("feedback", errc::overflow,
         "Phi tables need " + (bytes ? std::to_string(*bytes) : std::string(">2^64")) + " bytes, over the budget of " +
             std::to_string(budget_bytes) + "; use Monte Carlo mode or a smaller instance");
  const auto star = max_typeclass(n, q);
  FeedbackCode code;
  code.n = n;
  code.q = q;
  code.l = l;
  code.M = M;
  code.N = to_u64(count_types(n, q), "feedback", "N");
  require(code.N <= std::numeric_limits<std::uint32_t>::max(), "feedback", "type count exceeds table entry width");
  code.domain = to_u64(pow(star.size, l - 1), "feedback", "domain");
  code.pilot = representative(star.type);
  code.seed = rng.seed();
  code.phi.resize(M * code.domain);
  for (auto& v : code.phi) v = static_cast<std::uint32_t>(rng.uniform(code.N));
  return code;
}

/// lambda1 of the scheme: message i misses when the last block, sent as the
/// representative of Phi_i(y), does not land in the type class Phi_i(y).
inline Rational feedback_lambda1(const FeedbackCode& code) {
  const TypeSpace space(code.n, code.q);
  std::vector<bool> faithful(code.N);
  for (std::uint64_t t = 0; t < code.N; ++t) faithful[t] = space.index_of(space.representative(t)) == t;
  Rational worst = 0;
  for (std::uint64_t i = 0; i < code.M; ++i) {
    std::uint64_t misses = 0;
    const auto* r = code.row(i);
    for (std::uint64_t y = 0; y < code.domain; ++y) misses += !faithful[r[y]];
    worst = std::max(worst, Rational(big(misses), big(code.domain)));
  }
  worst.canonicalize();
  return worst;
}

inline std::uint64_t collision_count(const FeedbackCode& code, std::uint64_t j, std::uint64_t k) {
  const auto* a = code.row(j);
  const auto* b = code.row(k);
  std::uint64_t c = 0;
  for (std::uint64_t y = 0; y < code.domain; ++y) c += a[y] == b[y];
  return c;
}

struct CollisionReport {
  std::uint64_t M = 0;
  std::uint64_t N = 0;
  std::uint64_t domain = 0;
  std::uint64_t pairs = 0;
  std::uint64_t max_count = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> argmax;  // first maximal pair in (j, k) order
  Rational lambda1;
  Rational lambda2;               // max_count / domain
  Rational target;                // 2 / N
  bool pass = false;              // lambda2 <= 2/N
  bool symmetric = true;
  std::optional<std::vector<std::vector<std::uint64_t>>> counts;  // when M <= matrix cap
  double mean_fraction = 0;       // average collision fraction over pairs
};

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

namespace detail {

// Runs body(j, worker) for rows j = worker, worker + W, ... on W threads.
template <class Body>
void for_rows(std::uint64_t rows, unsigned workers, Body&& body) {
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(rows, 1)));
  if (workers == 1) {
    for (std::uint64_t j = 0; j < rows; ++j) body(j, 0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t j = w; j < rows; j += workers) body(j, w);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Exact collision scan over all unordered pairs; lambda_{j->k} = lambda_{k->j}
/// = (#matching Phi entries) / |T*|^{l-1}. With M = 1 there are no pairs.
inline CollisionReport eval_feedback_exact(const FeedbackCode& code, std::uint64_t matrix_cap = kDefaultMatrixCap,
                                           unsigned workers = default_workers()) {
  code.validate();
  CollisionReport out;
  out.M = code.M;
  out.N = code.N;
  out.domain = code.domain;
  out.target = Rational(2, static_cast<unsigned long>(code.N));
  out.target.canonicalize();
  out.lambda1 = feedback_lambda1(code);
  const bool keep = code.M <= matrix_cap;
  if (keep) out.counts.emplace(code.M, std::vector<std::uint64_t>(code.M, 0));

  struct Best {
    std::uint64_t count = 0;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> at;
    long double sum = 0;
  };
  std::vector<Best> best(std::max(1u, workers));
  detail::for_rows(code.M, workers, [&](std::uint64_t j, unsigned w) {
    auto& b = best[w];
    for (std::uint64_t k = j + 1; k < code.M; ++k) {
      const auto c = collision_count(code, j, k);
      b.sum += c;
      if (!b.at || c > b.count || (c == b.count && std::pair{j, k} < *b.at)) {
        b.count = c;
        b.at = {j, k};
      }
      if (keep) (*out.counts)[j][k] = (*out.counts)[k][j] = c;
    }
  });
  long double sum = 0;
  for (const auto& b : best) {
    sum += b.sum;
    if (!b.at) continue;
    if (!out.argmax || b.count > out.max_count || (b.count == out.max_count && *b.at < *out.argmax)) {
      out.max_count = b.count;
      out.argmax = b.at;
    }
  }
  out.pairs = code.M * (code.M - 1) / 2;
  if (keep && code.M <= 64) {
    // the reversed-order count is recomputed to confirm symmetry on small codes
    for (std::uint64_t j = 0; j < code.M; ++j)
      for (std::uint64_t k = 0; k < j; ++k) out.symmetric = out.symmetric && collision_count(code, j, k) == (*out.counts)[j][k];
  }
  out.lambda2 = Rational(big(out.max_count), big(code.domain));
  out.lambda2.canonicalize();
  out.pass = out.lambda2 <= out.target;
  out.mean_fraction = out.pairs ? static_cast<double>(sum / out.pairs / code.domain) : 0.0;
  return out;
}

struct TargetResult {
  bool pass = false;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> failing_pair;  // first failing pair in (j, k) order
};

/// lambda2 <= 2/N, i.e. every pair collides on at most 2 |T*|^{l-1} / N rank
/// tuples. Workers stop once any pair fails.
inline TargetResult target_test(const FeedbackCode& code, unsigned workers = default_workers()) {
  code.validate();
  if (code.M < 2) fail("feedback", errc::precondition, "target test needs M >= 2");
  // count * N <= 2 * domain, in 128 bits
  const unsigned __int128 limit = static_cast<unsigned __int128>(2) * code.domain;
  // rows after the earliest failing row seen so far are skipped, so the
  // reported pair is the first failing one whatever the thread schedule
  std::atomic<std::uint64_t> earliest{std::numeric_limits<std::uint64_t>::max()};
  std::vector<std::optional<std::pair<std::uint64_t, std::uint64_t>>> first(std::max(1u, workers));
  detail::for_rows(code.M, workers, [&](std::uint64_t j, unsigned w) {
    if (j > earliest.load(std::memory_order_relaxed)) return;
    for (std::uint64_t k = j + 1; k < code.M; ++k)
      if (static_cast<unsigned __int128>(collision_count(code, j, k)) * code.N > limit) {
        if (!first[w] || std::pair{j, k} < *first[w]) first[w] = std::pair{j, k};
        auto seen = earliest.load();
        while (j < seen && !earliest.compare_exchange_weak(seen, j)) {
        }
        return;
      }
  });
  TargetResult out;
  for (const auto& f : first)
    if (f && (!out.failing_pair || *f < *out.failing_pair)) out.failing_pair = f;
  out.pass = !out.failing_pair;
  return out;
}

struct RetryResult {
  std::uint64_t draws = 0;
  bool passed = false;
  std::optional<FeedbackCode> code;  // the passing draw
};

/// Re-draws Phi from streams root.split(attempt) until the target test passes or the budget runs out.
inline RetryResult retry_until_pass(std::uint32_t n, std::uint32_t q, std::uint32_t l, std::uint64_t M, const RngStream& root,
                                    std::uint64_t max_draws, std::uint64_t budget_bytes = kDefaultFeedbackBudget) {
  require(max_draws >= 1, "feedback", "retry budget must be >= 1");
  RetryResult out;
  for (std::uint64_t a = 0; a < max_draws; ++a) {
    RngStream rng = root.split(a);
    auto code = build_feedback_code(n, q, l, M, rng, budget_bytes);
    ++out.draws;
    if (target_test(code).pass) {
      out.passed = true;
      out.code = std::move(code);
      return out;
    }
  }
  return out;
}

/// Simulates the protocol: pilot blocks through the channel, Phi at the
/// realized output ranks, the last block through the channel, and every
/// decoder's type-membership test.
inline McReport eval_feedback_mc(const FeedbackCode& code, std::uint64_t trials, const RngStream& root,
                                 std::uint64_t matrix_cap = kDefaultMatrixCap) {
  code.validate();
  require(trials >= 1, "feedback", "trials must be >= 1");
  const PermutationChannel channel(code.n, code.q);
  const TypeSpace space(code.n, code.q);
  const std::uint64_t star_size = code.l > 1 ? to_u64(typeclass_size(type_of(code.pilot, code.q)), "feedback", "|T*|") : 1;
  std::vector<Word> reps;
  for (std::uint64_t t = 0; t < code.N; ++t) reps.push_back(space.representative(t));
  const auto M = code.M;
  std::vector<std::vector<std::uint64_t>> hits(M, std::vector<std::uint64_t>(M, 0));
  for (std::uint64_t i = 0; i < M; ++i) {
    RngStream rng = root.split(i);
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::uint64_t y = 0;
      bool pilots_in_star = true;
      for (std::uint32_t b = 0; b + 1 < code.l; ++b) {
        const Word out = channel.sample_output(code.pilot, rng);
        pilots_in_star = pilots_in_star && type_of(out, code.q) == type_of(code.pilot, code.q);
        y = y * star_size + rank_in_class<std::uint64_t>(out, code.q);
      }
      const Word last = channel.sample_output(reps[code.at(i, y)], rng);
      const auto received = space.index_of(last);
      for (std::uint64_t j = 0; j < M; ++j) hits[i][j] += pilots_in_star && code.at(j, y) == received;
    }
  }
  return detail::mc_report(hits, trials, matrix_cap);
}

/// M < 2^{q^{nl}}: the decoders of a code with lambda1 + lambda2 < 1 must be
/// distinct nonempty sets of output sequences. Exact for every input; when
/// q^{nl} >= 2^64 the bit length of M cannot reach it.
inline bool feedback_counting_converse(std::uint32_t n, std::uint32_t q, std::uint32_t l, const BigInt& M) {
  check_nq(n, q);
  require(l >= 1, "feedback", "block count l must be >= 1");
  if (sgn(M) <= 0) return true;
  const long double log2_exponent = static_cast<long double>(n) * l * std::log2(static_cast<long double>(q));
  if (log2_exponent >= 64) return true;
  const BigInt E = pow(BigInt(q), static_cast<std::uint64_t>(n) * l);
  return big(bit_length(M)) <= E;  // M < 2^E
}

}  // namespace permid
