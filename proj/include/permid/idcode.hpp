#pragma once

// Identification codes for the noiseless channel over [N] and for the
// (multi-block) permutation channel, their exact and sampled error
// evaluation, and the set-system based achievability constructions.

#include "permid/channel.hpp"
#include "permid/combinatorics.hpp"
#include "permid/core.hpp"
#include "permid/dist.hpp"
#include "permid/rng.hpp"
#include "permid/setsystem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace permid {

inline constexpr std::uint64_t kDefaultMatrixCap = 4096;

/// Code for NL_[N]. Decoders are stored as an M x N acceptance table
/// P_i(1|k); a deterministic code has every entry in {0, 1}.
struct NoiselessIdCode {
  std::uint64_t N = 0;
  std::vector<Dist> encoders;
  std::vector<std::vector<Rational>> accept;
  bool deterministic = false;

  std::uint64_t M() const { return encoders.size(); }

  static NoiselessIdCode make_deterministic(std::uint64_t N, std::vector<Dist> encoders,
                                            const std::vector<std::vector<std::uint64_t>>& decoders) {
    NoiselessIdCode c;
    c.N = N;
    c.encoders = std::move(encoders);
    c.deterministic = true;
    for (const auto& d : decoders) {
      std::vector<Rational> row(N);
      for (auto k : d) {
        require(k < N, "idcode", "decoder element outside [N]");
        row[k] = 1;
      }
      c.accept.push_back(std::move(row));
    }
    c.validate();
    return c;
  }

  static NoiselessIdCode make_stochastic(std::uint64_t N, std::vector<Dist> encoders, std::vector<std::vector<Rational>> accept) {
    NoiselessIdCode c;
    c.N = N;
    c.encoders = std::move(encoders);
    c.accept = std::move(accept);
    c.deterministic = false;
    c.validate();
    return c;
  }

  /// Decoder set of message i (entries with acceptance 1).
  std::vector<std::uint64_t> decoder_set(std::uint64_t i) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 0; k < N; ++k)
      if (accept[i][k] == 1) out.push_back(k);
    return out;
  }

  void validate() const {
    require(N >= 1, "idcode", "N must be >= 1");
    require(M() >= 1, "idcode", "code needs at least one message");
    if (accept.size() != M()) fail("idcode", errc::mismatch, "decoder count differs from encoder count");
    for (std::uint64_t i = 0; i < M(); ++i) {
      if (encoders[i].size() != N) fail("idcode", errc::mismatch, "encoder " + std::to_string(i) + " is not over [N]");
      if (accept[i].size() != N) fail("idcode", errc::mismatch, "decoder " + std::to_string(i) + " is not over [N]");
      for (const auto& a : accept[i]) {
        if (sgn(a) < 0 || a > 1) fail("idcode", errc::invariant, "acceptance probability outside [0,1]");
        if (deterministic && sgn(a) != 0 && a != 1) fail("idcode", errc::invariant, "deterministic decoder has a fractional entry");
      }
    }
  }
};

/// Code for l uses of the n-block q-ary permutation channel. Decoders are
/// kept as counts c_{i,v} = |D_i intersect (T_{j1} x ... x T_{jl})| indexed by
/// the mixed-radix value v of the block type tuple.
struct PermIdCode {
  std::uint32_t n = 1;
  std::uint32_t q = 2;
  std::uint32_t l = 1;
  std::vector<WordDist> encoders;  // words of length n*l
  std::vector<std::vector<BigInt>> accept_counts;
  std::optional<std::vector<std::vector<Word>>> decoder_sets;  // explicit sets at tiny scale

  std::uint64_t M() const { return encoders.size(); }
  std::uint64_t types_per_block() const { return to_u64(count_types(n, q), "idcode", "N"); }
  MixedRadix radix() const { return MixedRadix(types_per_block(), l); }
  std::uint64_t outcomes() const { return radix().total(); }

  /// prod_b |T_{j_b}| for the block type tuple with value v.
  BigInt product_class_size(const TypeSpace& space, std::uint64_t v) const {
    BigInt s = 1;
    for (auto j : radix().decode(v)) s *= space.class_size(j);
    return s;
  }

  void validate() const {
    check_nq(n, q);
    require(l >= 1, "idcode", "block count l must be >= 1");
    require(M() >= 1, "idcode", "code needs at least one message");
    if (accept_counts.size() != M()) fail("idcode", errc::mismatch, "decoder count differs from encoder count");
    const TypeSpace space(n, q);
    const auto total = outcomes();
    for (std::uint64_t i = 0; i < M(); ++i) {
      for (const auto& [w, p] : encoders[i].atoms())
        if (w.size() != static_cast<std::size_t>(n) * l) fail("idcode", errc::mismatch, "encoder word length differs from n*l");
      if (accept_counts[i].size() != total) fail("idcode", errc::mismatch, "decoder count table has wrong width");
      for (std::uint64_t v = 0; v < total; ++v) {
        const auto& c = accept_counts[i][v];
        if (sgn(c) < 0 || c > product_class_size(space, v))
          fail("idcode", errc::invariant, "acceptance count outside [0, class size]");
      }
    }
    if (decoder_sets) {
      if (decoder_sets->size() != M()) fail("idcode", errc::mismatch, "explicit decoder count differs from M");
      const auto r = radix();
      for (std::uint64_t i = 0; i < M(); ++i) {
        std::vector<BigInt> counts(total);
        std::set<Word> seen;
        for (const auto& w : (*decoder_sets)[i]) {
          if (!seen.insert(w).second) fail("idcode", errc::invariant, "repeated word in explicit decoder set");
          ++counts[block_type_index(w, n, q, r)];
        }
        if (counts != accept_counts[i]) fail("idcode", errc::invariant, "explicit decoder sets disagree with counts");
      }
    }
  }

  /// Builds counts from explicit decoder sets.
  static PermIdCode from_sets(std::uint32_t n, std::uint32_t q, std::uint32_t l, std::vector<WordDist> encoders,
                              std::vector<std::vector<Word>> sets) {
    PermIdCode c;
    c.n = n;
    c.q = q;
    c.l = l;
    c.encoders = std::move(encoders);
    const auto r = c.radix();
    for (const auto& s : sets) {
      std::vector<BigInt> counts(r.total());
      for (const auto& w : s) ++counts[block_type_index(w, n, q, r)];
      c.accept_counts.push_back(std::move(counts));
    }
    c.decoder_sets = std::move(sets);
    c.validate();
    return c;
  }
};

struct ErrorReport {
  std::uint64_t M = 0;
  Rational lambda1;
  Rational lambda2;
  Rational lambda;
  std::optional<std::vector<std::vector<Rational>>> matrix;  // [i][j] = lambda_{i->j}; diagonal left 0
  std::optional<std::vector<Rational>> missed;                // lambda_{i -/-> i}

  bool operator==(const ErrorReport&) const = default;
};

namespace detail {

/// Streams entries into maxima and, when M is under the cap, the full matrix.
class ReportBuilder {
 public:
  ReportBuilder(std::uint64_t M, std::uint64_t cap) : keep_(M <= cap) {
    r_.M = M;
    if (keep_) {
      r_.matrix.emplace(M, std::vector<Rational>(M));
      r_.missed.emplace(M);
    }
  }
  void missed(std::uint64_t i, const Rational& v) {
    if (v > r_.lambda1) r_.lambda1 = v;
    if (keep_) (*r_.missed)[i] = v;
  }
  void false_alarm(std::uint64_t i, std::uint64_t j, const Rational& v) {
    if (v > r_.lambda2) r_.lambda2 = v;
    if (keep_) (*r_.matrix)[i][j] = v;
  }
  ErrorReport finish() {
    r_.lambda = r_.lambda1 + r_.lambda2;
    return std::move(r_);
  }

 private:
  bool keep_;
  ErrorReport r_;
};

}  // namespace detail

/// Exact errors of a noiseless code. With M = 1 there are no pairs and lambda2 = 0.
inline ErrorReport eval_noiseless(const NoiselessIdCode& code, std::uint64_t matrix_cap = kDefaultMatrixCap) {
  code.validate();
  detail::ReportBuilder out(code.M(), matrix_cap);
  for (std::uint64_t i = 0; i < code.M(); ++i) {
    const auto support = code.encoders[i].support();
    for (std::uint64_t j = 0; j < code.M(); ++j) {
      Rational accepted = 0;
      for (auto k : support) accepted += code.encoders[i][k] * code.accept[j][k];
      if (i == j) out.missed(i, 1 - accepted);
      else out.false_alarm(i, j, accepted);
    }
  }
  return out.finish();
}

/// Exact errors of a permutation-channel code: sum over encoder atoms x of
/// Q_i(x) * c_{j,type(x)} / |T_type(x)|.
inline ErrorReport eval_perm_exact(const PermIdCode& code, std::uint64_t matrix_cap = kDefaultMatrixCap) {
  code.validate();
  const TypeSpace space(code.n, code.q);
  const auto radix = code.radix();
  detail::ReportBuilder out(code.M(), matrix_cap);
  for (std::uint64_t i = 0; i < code.M(); ++i) {
    std::vector<std::pair<std::uint64_t, Rational>> atoms;  // (type tuple, Q_i(x) / |T_x|)
    for (const auto& [x, p] : code.encoders[i].atoms()) {
      const auto v = block_type_index(x, code.n, code.q, radix);
      atoms.emplace_back(v, p / Rational(code.product_class_size(space, v)));
    }
    for (std::uint64_t j = 0; j < code.M(); ++j) {
      Rational accepted = 0;
      for (const auto& [v, w] : atoms) accepted += w * Rational(code.accept_counts[j][v]);
      if (i == j) out.missed(i, 1 - accepted);
      else out.false_alarm(i, j, accepted);
    }
  }
  return out.finish();
}

namespace detail {

/// Exact sampler for a finite rational distribution: common denominator plus
/// a cumulative integer table.
class RationalSampler {
 public:
  explicit RationalSampler(const std::vector<Rational>& probs) {
    BigInt den = 1;
    for (const auto& p : probs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.get_den_mpz_t());
    BigInt acc = 0;
    for (const auto& p : probs) {
      acc += p.get_num() * (den / p.get_den());
      cumulative_.push_back(acc);
    }
    total_ = den;
    small_ = fits_u64(den);
    if (small_)
      for (const auto& c : cumulative_) cumulative_u64_.push_back(to_u64(c, "idcode", "weight"));
  }

  std::size_t draw(RngStream& rng) const {
    if (small_) {
      const auto u = rng.uniform(cumulative_u64_.back());
      return std::upper_bound(cumulative_u64_.begin(), cumulative_u64_.end(), u) - cumulative_u64_.begin();
    }
    const BigInt u = rng.uniform(total_);
    return std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin();
  }

 private:
  std::vector<BigInt> cumulative_;
  std::vector<std::uint64_t> cumulative_u64_;
  BigInt total_;
  bool small_ = false;
};

/// Bernoulli(count / size) with a 64-bit fast path.
struct Acceptance {
  BigInt count;
  BigInt size;
  std::uint64_t count64 = 0;
  std::uint64_t size64 = 0;
  bool small = false;

  Acceptance(BigInt c, BigInt s) : count(std::move(c)), size(std::move(s)) {
    small = fits_u64(size);
    if (small) {
      count64 = to_u64(count, "idcode", "count");
      size64 = to_u64(size, "idcode", "size");
    }
  }
  bool draw(RngStream& rng) const {
    if (sgn(count) == 0) return false;
    if (count == size) return true;
    return small ? rng.uniform(size64) < count64 : rng.bernoulli(count, size);
  }
};

}  // namespace detail

struct McReport {
  ErrorReport estimate;                               // hits / trials, exact rationals
  std::uint64_t trials = 0;
  std::optional<std::vector<std::vector<double>>> matrix_stderr;
  std::optional<std::vector<double>> missed_stderr;
  double lambda1_stderr = 0;
  double lambda2_stderr = 0;
};

inline double binomial_stderr(const Rational& p_hat, std::uint64_t trials) {
  const double p = p_hat.get_d();
  return std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

namespace detail {

inline McReport mc_report(const std::vector<std::vector<std::uint64_t>>& hits, std::uint64_t trials, std::uint64_t matrix_cap) {
  const std::uint64_t M = hits.size();
  McReport out;
  out.trials = trials;
  detail::ReportBuilder builder(M, matrix_cap);
  const bool keep = M <= matrix_cap;
  if (keep) {
    out.matrix_stderr.emplace(M, std::vector<double>(M, 0.0));
    out.missed_stderr.emplace(M, 0.0);
  }
  for (std::uint64_t i = 0; i < M; ++i)
    for (std::uint64_t j = 0; j < M; ++j) {
      Rational accepted(big(hits[i][j]), big(trials));
      accepted.canonicalize();
      if (i == j) {
        const Rational miss = 1 - accepted;
        builder.missed(i, miss);
        if (keep) (*out.missed_stderr)[i] = binomial_stderr(miss, trials);
      } else {
        builder.false_alarm(i, j, accepted);
        if (keep) (*out.matrix_stderr)[i][j] = binomial_stderr(accepted, trials);
      }
    }
  out.estimate = builder.finish();
  out.lambda1_stderr = binomial_stderr(out.estimate.lambda1, trials);
  out.lambda2_stderr = binomial_stderr(out.estimate.lambda2, trials);
  return out;
}

}  // namespace detail

/// Monte Carlo errors: for each message, `trials` encoder draws are pushed
/// through independent channel uses and fed to every decoder.
inline McReport eval_perm_mc(const PermIdCode& code, std::uint64_t trials, const RngStream& root,
                             std::uint64_t matrix_cap = kDefaultMatrixCap) {
  code.validate();
  require(trials >= 1, "idcode", "trials must be >= 1");
  const TypeSpace space(code.n, code.q);
  const auto radix = code.radix();
  const PermutationChannel channel(code.n, code.q);
  const auto M = code.M();

  std::vector<std::set<Word>> explicit_sets;
  if (code.decoder_sets)
    for (const auto& s : *code.decoder_sets) explicit_sets.emplace_back(s.begin(), s.end());

  std::map<std::uint64_t, std::vector<detail::Acceptance>> accept_by_type;  // lazily per outcome v
  auto acceptance = [&](std::uint64_t v) -> const std::vector<detail::Acceptance>& {
    auto it = accept_by_type.find(v);
    if (it != accept_by_type.end()) return it->second;
    std::vector<detail::Acceptance> row;
    const BigInt size = code.product_class_size(space, v);
    for (std::uint64_t j = 0; j < M; ++j) row.emplace_back(code.accept_counts[j][v], size);
    return accept_by_type.emplace(v, std::move(row)).first->second;
  };

  std::vector<std::vector<std::uint64_t>> hits(M, std::vector<std::uint64_t>(M, 0));
  for (std::uint64_t i = 0; i < M; ++i) {
    RngStream rng = root.split(i);
    const auto& atoms = code.encoders[i].atoms();
    std::vector<Rational> probs;
    for (const auto& a : atoms) probs.push_back(a.second);
    const detail::RationalSampler sampler(probs);
    for (std::uint64_t t = 0; t < trials; ++t) {
      const Word& x = atoms[sampler.draw(rng)].first;
      const auto v = block_type_index(x, code.n, code.q, radix);
      if (!explicit_sets.empty()) {
        Word y;
        y.reserve(x.size());
        for (std::uint32_t b = 0; b < code.l; ++b) {
          auto block = channel.sample_output(std::span<const Symbol>(x).subspan(static_cast<std::size_t>(b) * code.n, code.n), rng);
          y.insert(y.end(), block.begin(), block.end());
        }
        for (std::uint64_t j = 0; j < M; ++j) hits[i][j] += explicit_sets[j].count(y);
      } else {
        // the channel output is uniform on the type class of x, so a decoder
        // holding c of its |T| words accepts with probability c/|T|
        const auto& row = acceptance(v);
        for (std::uint64_t j = 0; j < M; ++j) hits[i][j] += row[j].draw(rng);
      }
    }
  }

  return detail::mc_report(hits, trials, matrix_cap);
}

/// Unnormalized L1 distance, in [0, 2].
inline Rational tv_distance(const Dist& p, const Dist& r) {
  if (p.size() != r.size()) fail("idcode", errc::mismatch, "distributions live on different ground sets");
  Rational d = 0;
  for (std::uint64_t k = 0; k < p.size(); ++k) d += abs(p[k] - r[k]);
  return d;
}

/// 1 - min_{j != k} d(Q_j, Q_k), clamped at 0; a lower bound on lambda1 + lambda2.
inline Rational strong_converse_floor(const NoiselessIdCode& code) {
  if (code.M() < 2) fail("idcode", errc::precondition, "strong converse floor needs M >= 2");
  Rational best = 2;
  for (std::uint64_t j = 0; j < code.M(); ++j)
    for (std::uint64_t k = j + 1; k < code.M(); ++k) best = std::min(best, tv_distance(code.encoders[j], code.encoders[k]));
  Rational floor_value = 1 - best;
  return sgn(floor_value) < 0 ? Rational(0) : floor_value;
}

/// Noiseless code of a set system: encoder i uniform on U_i, decoder i = U_i.
inline NoiselessIdCode set_system_code(const SetSystem& system) {
  std::vector<Dist> enc;
  std::vector<std::vector<std::uint64_t>> dec;
  for (const auto& U : system.sets) {
    require(!U.empty(), "idcode", "set system code needs nonempty sets");
    dec.emplace_back(U.begin(), U.end());
    enc.push_back(Dist::uniform_on(system.N, dec.back()));
  }
  return NoiselessIdCode::make_deterministic(system.N, std::move(enc), dec);
}

/// Lifts a set system over [N^l] to a permutation-channel code: message i
/// sends a uniformly chosen element of U_i as the concatenated type
/// representatives, and decodes to the union of the matching product classes.
inline PermIdCode lift_set_system(std::uint32_t n, std::uint32_t q, std::uint32_t l, const SetSystem& system) {
  const TypeSpace space(n, q);
  const MixedRadix radix(space.size(), l);
  if (system.N != radix.total()) fail("idcode", errc::mismatch, "set system ground size differs from N^l");
  PermIdCode code;
  code.n = n;
  code.q = q;
  code.l = l;
  for (const auto& U : system.sets) {
    require(!U.empty(), "idcode", "cannot lift an empty set");
    std::vector<Word> words;
    std::vector<BigInt> counts(radix.total());
    for (auto v : U) {
      Word w;
      BigInt size = 1;
      for (auto j : radix.decode(v)) {
        const auto rep = space.representative(j);
        w.insert(w.end(), rep.begin(), rep.end());
        size *= space.class_size(j);
      }
      words.push_back(std::move(w));
      counts[v] = size;
    }
    code.encoders.push_back(WordDist::uniform(std::move(words)));
    code.accept_counts.push_back(std::move(counts));
  }
  code.validate();
  return code;
}

struct AchievableParams {
  std::uint32_t n = 0;
  std::uint32_t q = 2;
  std::uint32_t l = 1;
  Rational epsilon;                          // epsilon_n
  std::optional<std::uint64_t> requested_M;  // defaults to ceil(2^(epsilon n^{l(q-1)}))
  std::uint64_t max_attempts = 1'000'000;
  double log_base = 2.0;
};

struct AchievableReport {
  std::uint64_t ground = 0;      // N^l
  long double eps_prime = 0;     // epsilon'_n
  long double eps_prime_N = 0;   // epsilon'_n * N^l
  long double lambda2n = 0;      // 4 / log(1/epsilon'_n)
  bool hypotheses_hold = false;
  std::uint64_t Gamma = 0;
  std::uint64_t cap = 0;
  std::uint64_t target = 0;
  std::uint64_t attempts = 0;
  bool exhausted = false;
  Rational lambda2_bound;        // cap / Gamma
  SetSystem system;
};

struct AchievableCode {
  PermIdCode code;
  AchievableReport report;
};

namespace detail {

inline long double log_in(long double x, double base) { return std::log(x) / std::log(static_cast<long double>(base)); }

/// epsilon'_n N^l = epsilon_n n^{l(q-1)} + 1 + log(N^l).
inline AchievableReport achievable_parameters(const AchievableParams& p) {
  check_nq(p.n, p.q);
  require(p.l >= 1, "idcode", "block count l must be >= 1");
  require(sgn(p.epsilon) > 0, "idcode", "epsilon_n must be positive");
  AchievableReport r;
  const BigInt N = count_types(p.n, p.q);
  const BigInt ground = pow(N, p.l);
  if (!fits_u64(ground) || ground > big(1ULL << 40)) fail("idcode", errc::overflow, "N^l = " + ground.get_str() + " too large");
  r.ground = to_u64(ground, "idcode", "N^l");
  const long double volume = static_cast<long double>(pow(BigInt(p.n), static_cast<std::uint64_t>(p.l) * (p.q - 1)).get_d());
  const long double G = static_cast<long double>(r.ground);
  r.eps_prime_N = static_cast<long double>(p.epsilon.get_d()) * volume + 1.0L + detail::log_in(G, p.log_base);
  r.eps_prime = r.eps_prime_N / G;
  r.lambda2n = 4.0L / detail::log_in(1.0L / r.eps_prime, p.log_base);
  r.hypotheses_hold = r.eps_prime < 1.0L / 6 && r.lambda2n * detail::log_in(1.0L / r.eps_prime - 1.0L, p.log_base) > 2.0L;
  r.Gamma = static_cast<std::uint64_t>(std::floor(r.eps_prime_N));
  r.cap = static_cast<std::uint64_t>(std::floor(r.lambda2n * r.eps_prime_N));
  if (r.Gamma >= 1) r.lambda2_bound = Rational(big(r.cap), big(r.Gamma));
  r.lambda2_bound.canonicalize();
  return r;
}

}  // namespace detail

/// Smallest n' >= n (up to `limit`) at which the construction hypotheses hold, if any.
inline std::optional<std::uint32_t> minimal_feasible_n(AchievableParams p, std::uint32_t limit = 4096) {
  for (std::uint32_t m = std::max<std::uint32_t>(p.n, 1); m <= limit; ++m) {
    p.n = m;
    try {
      if (detail::achievable_parameters(p).hypotheses_hold) return m;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

/// Set-system construction over [N^l] with every parameter explicit, then lifted.
inline AchievableCode build_from_parameters(std::uint32_t n, std::uint32_t q, std::uint32_t l, std::uint64_t Gamma,
                                            std::uint64_t cap, std::uint64_t M, RngStream& rng,
                                            std::uint64_t max_attempts = 1'000'000) {
  AchievableCode out;
  out.report.ground = to_u64(pow(count_types(n, q), l), "idcode", "N^l");
  auto pack = greedy_pack(out.report.ground, Gamma, cap, M, rng, max_attempts);
  out.report.Gamma = Gamma;
  out.report.cap = cap;
  out.report.target = M;
  out.report.attempts = pack.attempts;
  out.report.exhausted = pack.exhausted;
  out.report.lambda2_bound = Rational(big(cap), big(Gamma));
  out.report.lambda2_bound.canonicalize();
  out.report.system = std::move(pack.system);
  out.code = lift_set_system(n, q, l, out.report.system);
  return out;
}

/// Multi-block achievability: the set-system code over [N^l] lifted through
/// the mixed-radix bijection. l = 1 is the one-shot construction.
inline AchievableCode build_multishot_achievable(const AchievableParams& p, RngStream& rng) {
  AchievableReport params = detail::achievable_parameters(p);
  if (!params.hypotheses_hold) {
    auto suggestion = minimal_feasible_n(p);
    std::string hint = suggestion ? "; smallest feasible n at this epsilon_n is " + std::to_string(*suggestion)
                                  : "; no feasible n found at this epsilon_n";
    fail("idcode", errc::infeasible,
         "construction hypotheses fail at n = " + std::to_string(p.n) + " (epsilon' = " + std::to_string(static_cast<double>(params.eps_prime)) +
             ", lambda2n = " + std::to_string(static_cast<double>(params.lambda2n)) + ")" + hint);
  }
  std::uint64_t target = 0;
  if (p.requested_M) {
    target = *p.requested_M;
  } else {
    const long double exponent = static_cast<long double>(p.epsilon.get_d()) *
                                 static_cast<long double>(pow(BigInt(p.n), static_cast<std::uint64_t>(p.l) * (p.q - 1)).get_d());
    if (exponent > 62) fail("idcode", errc::overflow, "message count 2^" + std::to_string(static_cast<double>(exponent)) + " too large");
    target = static_cast<std::uint64_t>(std::ceil(std::exp2(exponent)));
  }
  auto out = build_from_parameters(p.n, p.q, p.l, params.Gamma, params.cap, target, rng, p.max_attempts);
  params.target = out.report.target;
  params.attempts = out.report.attempts;
  params.exhausted = out.report.exhausted;
  params.system = std::move(out.report.system);
  out.report = std::move(params);
  return out;
}

inline AchievableCode build_oneshot_achievable(AchievableParams p, RngStream& rng) {
  p.l = 1;
  return build_multishot_achievable(p, rng);
}

}  // namespace permid
