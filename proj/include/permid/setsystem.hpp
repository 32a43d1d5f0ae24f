#pragma once

// (Gamma, Delta) set systems over the ground set {0, ..., N-1}: randomized
// Gilbert-style construction, exact intersection profiles, the complement
// transform, and the lower bounds that every such system must obey.

#include "permid/core.hpp"
#include "permid/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace permid {

using Subset = std::vector<std::uint32_t>;  // sorted, no repeats

struct SetSystem {
  std::uint64_t N = 0;
  std::vector<Subset> sets;

  /// Sorts each set and validates the elements; distinctness is not enforced here.
  static SetSystem make(std::uint64_t N, std::vector<Subset> sets) {
    require(N >= 1, "setsystem", "ground set size N must be >= 1");
    for (auto& s : sets) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) fail("setsystem", errc::invariant, "repeated element in a set");
      if (!s.empty() && s.back() >= N) fail("setsystem", errc::invariant, "set element outside [N]");
    }
    return SetSystem{N, std::move(sets)};
  }

  std::uint64_t size() const { return sets.size(); }

  bool is_distinct() const {
    std::set<Subset> seen(sets.begin(), sets.end());
    return seen.size() == sets.size();
  }

  bool is_constant_weight() const {
    return std::all_of(sets.begin(), sets.end(), [&](const Subset& s) { return s.size() == sets.front().size(); });
  }
};

inline std::uint64_t intersection_size(const Subset& a, const Subset& b) {
  std::uint64_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

struct IntersectionProfile {
  std::uint64_t Gamma = 0;
  std::uint64_t Delta = 0;
  Rational epsilon;  // Gamma / N
  Rational delta;    // Delta / N

  Rational ratio() const {
    Rational r(big(Delta), big(Gamma));
    r.canonicalize();
    return r;
  }
};

/// Exact Gamma and Delta by a pairwise scan. A one-set family has Delta = 0.
inline IntersectionProfile verify_profile(const SetSystem& S) {
  if (S.sets.empty()) fail("setsystem", errc::precondition, "empty set system");
  if (!S.is_constant_weight()) fail("setsystem", errc::precondition, "set system is not constant-weight");
  IntersectionProfile p;
  p.Gamma = S.sets.front().size();
  if (p.Gamma == 0) fail("setsystem", errc::precondition, "sets must be nonempty");
  for (std::size_t i = 0; i < S.sets.size(); ++i)
    for (std::size_t j = i + 1; j < S.sets.size(); ++j) p.Delta = std::max(p.Delta, intersection_size(S.sets[i], S.sets[j]));
  p.epsilon = Rational(big(p.Gamma), big(S.N));
  p.delta = Rational(big(p.Delta), big(S.N));
  p.epsilon.canonicalize();
  p.delta.canonicalize();
  return p;
}

/// Complements of every set; defined for constant-weight systems with Gamma > N/2.
inline SetSystem complement_system(const SetSystem& S) {
  const auto profile = verify_profile(S);
  if (2 * profile.Gamma <= S.N)
    fail("setsystem", errc::precondition, "complement transform needs Gamma > N/2 (Gamma = " + std::to_string(profile.Gamma) + ")");
  std::vector<Subset> out;
  out.reserve(S.sets.size());
  for (const auto& s : S.sets) {
    Subset c;
    c.reserve(S.N - s.size());
    auto it = s.begin();
    for (std::uint32_t x = 0; x < S.N; ++x) {
      if (it != s.end() && *it == x) ++it;
      else c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return SetSystem::make(S.N, std::move(out));
}

/// Uniform k-subset of [N] (Floyd's algorithm), sorted.
inline Subset random_subset(std::uint64_t N, std::uint64_t k, RngStream& rng) {
  require(k <= N, "setsystem", "subset larger than ground set");
  std::set<std::uint32_t> chosen;
  for (std::uint64_t j = N - k; j < N; ++j) {
    auto t = static_cast<std::uint32_t>(rng.uniform(j + 1));
    if (!chosen.insert(t).second) chosen.insert(static_cast<std::uint32_t>(j));
  }
  return Subset(chosen.begin(), chosen.end());
}

struct PackResult {
  SetSystem system;
  std::uint64_t Gamma = 0;
  std::uint64_t cap = 0;
  std::uint64_t target = 0;
  std::uint64_t attempts = 0;
  bool exhausted = false;  // attempt budget ran out before the target
};

namespace detail {

class BitRows {
 public:
  explicit BitRows(std::uint64_t N) : words_((N + 63) / 64) {}
  std::vector<std::uint64_t> row(const Subset& s) const {
    std::vector<std::uint64_t> r(words_, 0);
    for (auto x : s) r[x / 64] |= 1ULL << (x % 64);
    return r;
  }
  static std::uint64_t overlap(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < a.size(); ++k) c += std::popcount(a[k] & b[k]);
    return c;
  }

 private:
  std::size_t words_;
};

}  // namespace detail

/// Rejection-sampling greedy: draw uniform Gamma-subsets and keep one iff it
/// meets every kept set in at most `cap` points (and differs from all of them).
inline PackResult greedy_pack(std::uint64_t N, std::uint64_t Gamma, std::uint64_t cap, std::uint64_t target, RngStream& rng,
                              std::uint64_t max_attempts) {
  require(Gamma >= 1 && Gamma <= N, "setsystem", "set size Gamma must be in [1, N]");
  require(target >= 1, "setsystem", "target count must be >= 1");
  const BigInt available = binomial(N, Gamma);
  if (big(target) > available)
    fail("setsystem", errc::infeasible,
         "target " + std::to_string(target) + " exceeds the " + available.get_str() + " subsets of size " + std::to_string(Gamma));
  PackResult out;
  out.Gamma = Gamma;
  out.cap = cap;
  out.target = target;
  out.system.N = N;
  detail::BitRows bits(N);
  std::vector<std::vector<std::uint64_t>> kept;
  while (out.system.sets.size() < target && out.attempts < max_attempts) {
    ++out.attempts;
    Subset candidate = random_subset(N, Gamma, rng);
    auto row = bits.row(candidate);
    bool ok = true;
    for (const auto& other : kept) {
      auto overlap = detail::BitRows::overlap(row, other);
      if (overlap > cap || overlap == Gamma) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    kept.push_back(std::move(row));
    out.system.sets.push_back(std::move(candidate));
  }
  out.exhausted = out.system.sets.size() < target;
  return out;
}

/// Maximal family: scan all Gamma-subsets in a random order, keeping each
/// one compatible with everything kept so far. Intended for small N.
inline SetSystem greedy_maximal_family(std::uint64_t N, std::uint64_t Gamma, std::uint64_t cap, RngStream& rng) {
  require(Gamma >= 1 && Gamma <= N && N <= 24, "setsystem", "maximal family needs 1 <= Gamma <= N <= 24");
  std::vector<Subset> all;
  Subset cur(Gamma);
  for (std::uint32_t k = 0; k < Gamma; ++k) cur[k] = k;
  for (;;) {
    all.push_back(cur);
    std::int64_t k = static_cast<std::int64_t>(Gamma) - 1;
    while (k >= 0 && cur[k] == N - Gamma + k) --k;
    if (k < 0) break;
    ++cur[k];
    for (std::uint64_t m = k + 1; m < Gamma; ++m) cur[m] = cur[m - 1] + 1;
  }
  for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.uniform(i)]);
  std::vector<Subset> kept;
  for (auto& s : all) {
    bool ok = std::all_of(kept.begin(), kept.end(), [&](const Subset& o) { return intersection_size(s, o) <= cap; });
    if (ok) kept.push_back(std::move(s));
  }
  return SetSystem::make(N, std::move(kept));
}

/// ceil(2^(eps*N - 1) / N), the count guaranteed by the Gilbert-type existence bound.
inline BigInt gilbert_floor(std::uint64_t N, const Rational& epsilon) {
  Rational e = epsilon * big(N) - 1;
  e.canonicalize();
  if (sgn(e) <= 0) return BigInt(1);
  const auto b = to_u64(e.get_den(), "setsystem", "exponent denominator");
  const auto a = to_u64(e.get_num(), "setsystem", "exponent numerator");
  BigInt root;
  const BigInt power = BigInt(1) << a;
  BigInt two_pow;  // ceil(2^(a/b))
  if (mpz_root(root.get_mpz_t(), power.get_mpz_t(), b) != 0) two_pow = root;
  else two_pow = root + 1;
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), two_pow.get_mpz_t(), big(N).get_mpz_t());
  return out;
}

struct GilbertParams {
  std::uint64_t N = 0;
  Rational epsilon;
  Rational lambda;
  std::optional<std::uint64_t> requested_M;  // defaults to the existence floor
  std::uint64_t max_attempts = 1'000'000;
  bool check_hypotheses = true;
  double log_base = 2.0;
};

struct GilbertResult {
  PackResult pack;
  BigInt existence_floor;
  bool hypotheses_hold = false;
};

/// lambda * log_base(1/eps - 1) > 2 and eps < 1/6.
inline bool gilbert_hypotheses(const Rational& epsilon, const Rational& lambda, double log_base = 2.0) {
  if (!(sgn(epsilon) > 0 && epsilon < Rational(1, 6))) return false;
  if (!(sgn(lambda) > 0 && lambda < Rational(1, 2))) return false;
  const long double inv = 1.0L / static_cast<long double>(epsilon.get_d()) - 1.0L;
  return static_cast<long double>(lambda.get_d()) * std::log(inv) / std::log(static_cast<long double>(log_base)) > 2.0L;
}

inline GilbertResult greedy_gilbert(const GilbertParams& params, RngStream& rng) {
  require(params.N >= 1, "setsystem", "N must be >= 1");
  require(sgn(params.epsilon) > 0 && params.epsilon < 1, "setsystem", "epsilon must lie in (0,1)");
  require(sgn(params.lambda) > 0 && params.lambda < 1, "setsystem", "lambda must lie in (0,1)");
  GilbertResult out;
  out.hypotheses_hold = gilbert_hypotheses(params.epsilon, params.lambda, params.log_base);
  if (params.check_hypotheses && !out.hypotheses_hold)
    fail("setsystem", errc::precondition,
         "need lambda in (0,1/2), eps < 1/6 and lambda*log(1/eps - 1) > 2 (eps = " + to_pq(params.epsilon) + ", lambda = " +
             to_pq(params.lambda) + ")");
  const Rational eps_n = params.epsilon * big(params.N);
  const BigInt Gamma = floor(eps_n);
  if (Gamma < 1) fail("setsystem", errc::precondition, "floor(eps*N) = 0; no sets to build");
  const BigInt cap = floor(params.lambda * eps_n);
  out.existence_floor = gilbert_floor(params.N, params.epsilon);
  std::uint64_t target = params.requested_M.value_or(0);
  if (!params.requested_M) {
    if (!fits_u64(out.existence_floor))
      fail("setsystem", errc::overflow, "existence floor " + out.existence_floor.get_str() + " too large to construct");
    target = to_u64(out.existence_floor, "setsystem", "target");
  }
  out.pack = greedy_pack(params.N, to_u64(Gamma, "setsystem", "Gamma"), to_u64(cap, "setsystem", "cap"), target, rng,
                         params.max_attempts);
  return out;
}

/// Binary entropy in bits.
inline double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Inverse of h2 on [0, 1/2], by bisection.
inline double h2_inv(double v) {
  if (!(v >= 0.0 && v <= 1.0)) fail("setsystem", errc::precondition, "h2_inv argument outside [0,1]");
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 0.5;
  auto h = [](long double x) { return -x * std::log2(x) - (1.0L - x) * std::log2(1.0L - x); };
  long double lo = 0.0L;
  long double hi = 0.5L;
  for (int it = 0; it < 200 && hi - lo > 1e-18L; ++it) {
    long double mid = (lo + hi) / 2;
    if (h(mid) < v) lo = mid;
    else hi = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

inline double log2_big(const BigInt& m) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, m.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

/// (1 - alpha) * h2^{-1}(log2(M) / N) without checking the hypothesis on M.
inline double prop2_bound_value(std::uint64_t N, const BigInt& M, const Rational& alpha) {
  require(M >= 1, "setsystem", "M must be >= 1");
  if (M > (BigInt(1) << N)) fail("setsystem", errc::precondition, "log2(M)/N > 1: h2 inverse undefined");
  const double v = M == (BigInt(1) << N) ? 1.0 : std::min(1.0, log2_big(M) / static_cast<double>(N));
  return (1.0 - alpha.get_d()) * h2_inv(v);
}

/// Lower bound on Delta/Gamma for any constant-weight system of M sets over [N],
/// valid when M > 1 + N/alpha.
inline double prop2_lower_bound(std::uint64_t N, const BigInt& M, const Rational& alpha) {
  require(sgn(alpha) > 0 && alpha < 1, "setsystem", "alpha must lie in (0,1)");
  if (!(Rational(M) > 1 + Rational(big(N)) / alpha))
    fail("setsystem", errc::precondition, "needs M > 1 + N/alpha (M = " + M.get_str() + ")");
  return prop2_bound_value(N, M, alpha);
}

/// 1 + N/alpha: the largest family size compatible with delta <= (1-alpha) eps^2.
inline Rational lemma6_size_cap(std::uint64_t N, const Rational& alpha) { return 1 + Rational(big(N)) / alpha; }

/// delta > (1 - alpha) * eps^2, checked exactly; needs M > 1 + N/alpha.
inline bool lemma6_check(const SetSystem& S, const Rational& alpha) {
  require(sgn(alpha) > 0 && alpha < 1, "setsystem", "alpha must lie in (0,1)");
  if (!(Rational(big(S.size())) > lemma6_size_cap(S.N, alpha)))
    fail("setsystem", errc::precondition, "needs M > 1 + N/alpha (M = " + std::to_string(S.size()) + ")");
  const auto p = verify_profile(S);
  // Delta/N > (1-alpha) Gamma^2/N^2  <=>  Delta*N > (1-alpha) Gamma^2
  return Rational(big(p.Delta) * big(S.N)) > (1 - alpha) * Rational(big(p.Gamma) * big(p.Gamma));
}

/// floor(N d / (2w^2 - 2Nw + Nd)) when the denominator is positive.
inline BigInt johnson_bound_M(std::uint64_t N, std::uint64_t d, std::uint64_t w) {
  const BigInt den = 2 * big(w) * big(w) - 2 * big(N) * big(w) + big(N) * big(d);
  if (sgn(den) <= 0) fail("setsystem", errc::precondition, "Johnson bound inapplicable: 2w^2 - 2Nw + Nd = " + den.get_str());
  return BigInt(big(N) * big(d) / den);
}

}  // namespace permid
