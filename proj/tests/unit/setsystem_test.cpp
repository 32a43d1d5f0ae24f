#include "permid/setsystem.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace permid;

TEST(SetSystem, Profiles) {
  auto a = verify_profile(SetSystem::make(4, {{0, 1}, {2, 3}}));
  EXPECT_EQ(a.Gamma, 2u);
  EXPECT_EQ(a.Delta, 0u);
  auto b = verify_profile(SetSystem::make(4, {{0, 1}, {0, 2}}));
  EXPECT_EQ(b.Delta, 1u);
  EXPECT_EQ(b.epsilon, Rational(1, 2));
  EXPECT_EQ(b.delta, Rational(1, 4));
  EXPECT_EQ(verify_profile(SetSystem::make(5, {{0, 3, 4}})).Delta, 0u);
  EXPECT_THROW(verify_profile(SetSystem::make(4, {{0, 1}, {2}})), Error);
  EXPECT_THROW(SetSystem::make(3, {{0, 3}}), Error);
  EXPECT_FALSE(SetSystem::make(3, {{0, 1}, {1, 0}}).is_distinct());
}

TEST(SetSystem, Complement) {
  auto c = complement_system(SetSystem::make(4, {{0, 1, 2}, {0, 1, 3}}));
  EXPECT_EQ(c.sets, (std::vector<Subset>{{3}, {2}}));
  auto p = verify_profile(c);
  EXPECT_EQ(p.Gamma, 1u);
  EXPECT_EQ(p.Delta, 0u);

  auto six = SetSystem::make(6, {{0, 1, 2, 3}, {0, 1, 2, 4}});
  auto pc = verify_profile(complement_system(six));
  EXPECT_EQ(pc.Gamma, 2u);
  EXPECT_EQ(pc.Delta, 1u);
  EXPECT_THROW(complement_system(SetSystem::make(4, {{0, 1}, {2, 3}})), Error);
}

TEST(SetSystem, ComplementChainRandom) {
  RngStream rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t N = 3 + rng.uniform(18);
    const std::uint64_t Gamma = N / 2 + 1 + rng.uniform(N - N / 2);
    if (Gamma >= N) continue;
    std::vector<Subset> sets;
    const auto M = 1 + rng.uniform(8);
    for (std::uint64_t i = 0; i < M; ++i) sets.push_back(random_subset(N, Gamma, rng));
    auto S = SetSystem::make(N, sets);
    auto p = verify_profile(S);
    auto C = complement_system(S);
    auto pc = verify_profile(C);
    EXPECT_EQ(pc.Gamma, N - Gamma);
    if (M > 1) {
      EXPECT_EQ(pc.Delta, N - 2 * Gamma + p.Delta);
    }
    EXPECT_LE(pc.ratio(), p.ratio());
    if (2 * pc.Gamma > N) {
      auto back = verify_profile(complement_system(C));
      EXPECT_EQ(back.Gamma, p.Gamma);
      EXPECT_EQ(back.Delta, p.Delta);
    }
  }
}

TEST(SetSystem, RandomSubsetIsUniformSized) {
  RngStream rng(4);
  std::vector<int> hits(10);
  for (int k = 0; k < 20000; ++k) {
    auto s = random_subset(10, 3, rng);
    ASSERT_EQ(s.size(), 3u);
    ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
    for (auto x : s) ++hits[x];
  }
  for (int h : hits) EXPECT_NEAR(h, 6000, 300);
}

TEST(SetSystem, GreedyDisjointPairs) {
  RngStream rng(1);
  auto r = greedy_pack(20, 2, 0, 10, rng, 100000);
  EXPECT_FALSE(r.exhausted);
  EXPECT_EQ(r.system.size(), 10u);
  EXPECT_EQ(verify_profile(r.system).Delta, 0u);
}

TEST(SetSystem, GreedyBudgetExhaustionIsFlagged) {
  RngStream rng(2);
  auto r = greedy_pack(20, 2, 0, 11, rng, 5000);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.system.size(), 10u);
  EXPECT_THROW(greedy_pack(5, 2, 0, 11, rng, 10), Error);  // C(5,2) = 10 < 11
}

TEST(SetSystem, GilbertHypotheses) {
  EXPECT_FALSE(gilbert_hypotheses(Rational(1, 10), Rational(2, 5)));  // 0.4*log2(9) = 1.27
  EXPECT_TRUE(gilbert_hypotheses(Rational(1, 100), Rational(2, 5)));  // 0.4*log2(99) = 2.65
  EXPECT_FALSE(gilbert_hypotheses(Rational(1, 5), Rational(2, 5)));
  EXPECT_TRUE(gilbert_hypotheses(Rational(1, 10), Rational(2, 5), 1.5));  // base knob
  RngStream rng(3);
  EXPECT_THROW(greedy_gilbert({20, Rational(1, 10), Rational(2, 5), {}}, rng), Error);
}

TEST(SetSystem, GilbertFloor) {
  EXPECT_EQ(gilbert_floor(60, Rational(1, 10)), 1);      // ceil(32/60)
  EXPECT_EQ(gilbert_floor(200, Rational(1, 20)), 3);     // ceil(2^9/200)
  EXPECT_EQ(gilbert_floor(1000, Rational(1, 50)), 525);  // ceil(2^19/1000)
  EXPECT_EQ(gilbert_floor(10, Rational(1, 20)), 1);
}

TEST(SetSystem, GilbertRespectsCap) {
  RngStream rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    GilbertParams p;
    p.N = 10 + rng.uniform(190);
    p.epsilon = Rational(1 + static_cast<long>(rng.uniform(15)), 100);
    p.lambda = Rational(1 + static_cast<long>(rng.uniform(9)), 20);
    p.requested_M = 1 + rng.uniform(30);
    p.max_attempts = 2000;
    p.check_hypotheses = false;
    if (p.epsilon * big(p.N) < 1) continue;
    if (big(*p.requested_M) > binomial(p.N, to_u64(floor(p.epsilon * big(p.N)), "t", "G"))) continue;
    auto r = greedy_gilbert(p, rng);
    auto prof = verify_profile(r.pack.system);
    EXPECT_LE(prof.Delta, r.pack.cap);
    EXPECT_EQ(prof.Gamma, r.pack.Gamma);
    EXPECT_TRUE(r.pack.system.is_distinct());
    EXPECT_EQ(r.pack.exhausted, r.pack.system.size() < *p.requested_M);
  }
}

TEST(SetSystem, GilbertDefaultTargetUnderHypotheses) {
  RngStream rng(6);
  auto r = greedy_gilbert({1000, Rational(1, 50), Rational(2, 5), {}}, rng);
  EXPECT_TRUE(r.hypotheses_hold);
  EXPECT_EQ(r.existence_floor, 525);
  EXPECT_EQ(r.pack.Gamma, 20u);
  EXPECT_EQ(r.pack.cap, 8u);
  EXPECT_FALSE(r.pack.exhausted);
  EXPECT_LE(verify_profile(r.pack.system).Delta, 8u);
}

TEST(Entropy, H2Inverse) {
  EXPECT_DOUBLE_EQ(h2_inv(1.0), 0.5);
  EXPECT_DOUBLE_EQ(h2_inv(0.0), 0.0);
  EXPECT_NEAR(h2(0.1), 0.4689955935892812, 1e-15);
  EXPECT_NEAR(h2_inv(h2(0.1)), 0.1, 1e-10);
  EXPECT_NEAR(h2_inv(std::log2(9.0) / 8), 0.07832249097362625, 1e-12);
  EXPECT_THROW(h2_inv(1.5), Error);
  EXPECT_THROW(h2_inv(-0.1), Error);
  for (int k = 0; k <= 1000; ++k) {
    double v = k / 1000.0;
    EXPECT_LE(std::abs(h2(h2_inv(v)) - v), 1e-10);
  }
}

TEST(Bounds, IntersectionLowerBound) {
  EXPECT_DOUBLE_EQ(prop2_bound_value(8, BigInt(256), Rational(1, 2)), 0.25);
  EXPECT_NEAR(prop2_bound_value(8, BigInt(9), Rational(1, 2)), 0.0391612454868131, 1e-12);
  EXPECT_LT(prop2_bound_value(1000, BigInt(2), Rational(1, 2)), 1e-3);
  EXPECT_THROW(prop2_lower_bound(8, BigInt(9), Rational(1, 2)), Error);  // needs M > 17
  EXPECT_THROW(prop2_bound_value(8, BigInt(257), Rational(1, 2)), Error);
  EXPECT_NO_THROW(prop2_lower_bound(8, BigInt(18), Rational(1, 2)));
}

TEST(Bounds, SizeCapHypothesis) {
  std::vector<Subset> pairs;
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = a + 1; b < 4; ++b) pairs.push_back({a, b});
  auto S = SetSystem::make(4, pairs);
  EXPECT_THROW(lemma6_check(S, Rational(1, 2)), Error);
  EXPECT_TRUE(lemma6_check(S, Rational(9, 10)));
  EXPECT_THROW(lemma6_check(SetSystem::make(4, {{0, 1}}), Rational(9, 10)), Error);
}

TEST(Bounds, Johnson) {
  EXPECT_EQ(johnson_bound_M(4, 4, 2), 2);
  EXPECT_EQ(johnson_bound_M(8, 4, 2), 4);
  // w = N/2, Delta = N/4 = eps^2 N, d = 2(w - Delta): denominator is zero
  EXPECT_THROW(johnson_bound_M(8, 4, 4), Error);
}
