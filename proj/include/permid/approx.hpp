#pragma once

// Resolution-K approximation of a distribution on [N] by the push-forward of
// a uniform variable on K atoms, and the pigeonhole collision argument built on it.

#include "permid/core.hpp"
#include "permid/dist.hpp"
#include "permid/idcode.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace permid {

struct ApproxMap {
  std::uint64_t N = 0;
  std::uint64_t K = 0;
  std::vector<std::uint64_t> atoms;  // m_y, summing to K

  Dist dist() const {
    std::vector<Rational> p(N);
    for (std::uint64_t y = 0; y < N; ++y) {
      p[y] = Rational(big(atoms[y]), big(K));
      p[y].canonicalize();
    }
    return Dist(std::move(p));
  }

  bool operator==(const ApproxMap&) const = default;
};

/// Exact unnormalized L1 distance sum_y |p_y - m_y / K|.
inline Rational approx_distance(const ApproxMap& map, const Dist& target) {
  if (map.N != target.size() || map.atoms.size() != map.N) fail("approx", errc::mismatch, "map and target sizes differ");
  Rational d = 0;
  const BigInt K = big(map.K);
  for (std::uint64_t y = 0; y < map.N; ++y) d += abs(target[y] - Rational(big(map.atoms[y]), K));
  d.canonicalize();
  return d;
}

/// Largest-remainder allocation: floor(K p_y) atoms each, then one more atom to
/// the largest remainders (smallest index on ties). Checks d <= N/K.
inline ApproxMap build_approx(const Dist& target, std::uint64_t K) {
  require(K >= 1, "approx", "resolution K must be >= 1");
  const std::uint64_t N = target.size();
  require(N >= 1, "approx", "target must be nonempty");
  ApproxMap map{N, K, std::vector<std::uint64_t>(N, 0)};
  std::vector<Rational> remainder(N);
  std::uint64_t placed = 0;
  for (std::uint64_t y = 0; y < N; ++y) {
    const Rational scaled = target[y] * big(K);
    const BigInt whole = floor(scaled);
    map.atoms[y] = to_u64(whole, "approx", "atom count");
    placed += map.atoms[y];
    remainder[y] = scaled - Rational(whole);
  }
  std::vector<std::uint64_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) { return remainder[a] > remainder[b]; });
  for (std::uint64_t r = 0; placed < K; ++r, ++placed) ++map.atoms[order[r]];
  const Rational d = approx_distance(map, target);
  if (d > Rational(big(N), big(K)))
    fail("approx", errc::bound_violation, "distance " + to_pq(d) + " exceeds N/K = " + std::to_string(N) + "/" + std::to_string(K));
  return map;
}

/// C(K + N - 1, N - 1): the number of distinct maps at resolution K.
inline BigInt count_resolution_types(std::uint64_t N, std::uint64_t K) {
  require(N >= 1 && K >= 1, "approx", "N and K must be >= 1");
  return binomial(K + N - 1, N - 1);
}

/// ceil(N^alpha) for a rational alpha = a/b, exactly.
inline std::uint64_t resolution_for(std::uint64_t N, const Rational& alpha) {
  require(sgn(alpha) > 0, "approx", "alpha must be positive");
  const auto a = to_u64(alpha.get_num(), "approx", "alpha numerator");
  const auto b = to_u64(alpha.get_den(), "approx", "alpha denominator");
  const BigInt value = pow(big(N), a);
  BigInt r;
  const bool exact = mpz_root(r.get_mpz_t(), value.get_mpz_t(), b) != 0;
  return to_u64(exact ? r : BigInt(r + 1), "approx", "K");
}

struct CollisionPair {
  std::uint64_t j = 0;
  std::uint64_t k = 0;
  Rational floor_value;  // 1 - (d_j + d_k), may be negative
};

struct PigeonholeReport {
  std::uint64_t K = 0;
  BigInt distinct_maps;
  bool guaranteed = false;  // M > number of distinct maps
  std::vector<ApproxMap> maps;
  std::vector<Rational> distances;
  std::vector<CollisionPair> collisions;
  std::optional<Rational> best_floor;  // max over colliding pairs, clamped at 0
  Rational lambda;                     // exact lambda1 + lambda2
  bool holds = true;                   // lambda >= best_floor
};

/// Builds every encoder's map at resolution K; for two messages sharing a map,
/// d(Q_j, Q_k) <= d_j + d_k, so lambda1 + lambda2 >= 1 - (d_j + d_k).
inline PigeonholeReport pigeonhole_collision_check(const NoiselessIdCode& code, std::uint64_t K,
                                                   std::uint64_t max_pairs = 1 << 16) {
  if (code.M() < 2) fail("approx", errc::precondition, "collision check needs M >= 2");
  PigeonholeReport out;
  out.K = K;
  out.distinct_maps = count_resolution_types(code.N, K);
  out.guaranteed = big(code.M()) > out.distinct_maps;
  std::map<std::vector<std::uint64_t>, std::vector<std::uint64_t>> groups;
  for (std::uint64_t i = 0; i < code.M(); ++i) {
    out.maps.push_back(build_approx(code.encoders[i], K));
    out.distances.push_back(approx_distance(out.maps.back(), code.encoders[i]));
    groups[out.maps.back().atoms].push_back(i);
  }
  for (const auto& [atoms, members] : groups)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto j = members[a];
        const auto k = members[b];
        Rational f = 1 - (out.distances[j] + out.distances[k]);
        const Rational clamped = sgn(f) < 0 ? Rational(0) : f;
        if (!out.best_floor || clamped > *out.best_floor) out.best_floor = clamped;
        if (out.collisions.size() < max_pairs) out.collisions.push_back({j, k, std::move(f)});
      }
  if (out.guaranteed && !out.best_floor) fail("approx", errc::invariant, "pigeonhole guarantees a collision but none was found");
  out.lambda = eval_noiseless(code, 0).lambda;
  out.holds = !out.best_floor || out.lambda >= *out.best_floor;
  return out;
}

}  // namespace permid
