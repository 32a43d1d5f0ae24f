#include "permid/idcode.hpp"
#include "support/random_codes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace permid;
using permid::testing::random_count_code;
using permid::testing::random_noiseless;
using permid::testing::random_perm_code;

TEST(Noiseless, Examples) {
  auto disjoint = NoiselessIdCode::make_deterministic(4, {Dist::uniform_on(4, std::vector<std::uint64_t>{0, 1}),
                                                          Dist::uniform_on(4, std::vector<std::uint64_t>{2, 3})},
                                                      {{0, 1}, {2, 3}});
  auto r = eval_noiseless(disjoint);
  EXPECT_EQ(r.lambda1, 0);
  EXPECT_EQ(r.lambda2, 0);

  auto same = NoiselessIdCode::make_deterministic(3, {Dist::point(3, 1), Dist::point(3, 1)}, {{1}, {1}});
  EXPECT_EQ((*eval_noiseless(same).matrix)[0][1], 1);

  auto half = NoiselessIdCode::make_deterministic(3, {Dist::uniform_on(3, std::vector<std::uint64_t>{0, 1}), Dist::point(3, 2)},
                                                  {{0, 1}, {1}});
  EXPECT_EQ((*eval_noiseless(half).matrix)[0][1], Rational(1, 2));
  EXPECT_EQ(eval_noiseless(half).lambda1, 1);

  auto single = NoiselessIdCode::make_deterministic(2, {Dist::point(2, 0)}, {{0}});
  EXPECT_EQ(eval_noiseless(single).lambda2, 0);
}

TEST(Noiseless, StochasticAndValidation) {
  auto c = NoiselessIdCode::make_stochastic(2, {Dist::point(2, 0), Dist::point(2, 1)},
                                            {{Rational(3, 4), Rational(1, 3)}, {Rational(1, 2), Rational(1)}});
  auto r = eval_noiseless(c);
  EXPECT_EQ((*r.missed)[0], Rational(1, 4));
  EXPECT_EQ((*r.matrix)[0][1], Rational(1, 2));
  EXPECT_EQ((*r.matrix)[1][0], Rational(1, 3));
  EXPECT_EQ(r.lambda, Rational(1, 4) + Rational(1, 2));
  EXPECT_THROW(NoiselessIdCode::make_stochastic(2, {Dist::point(2, 0)}, {{Rational(3, 2), 0}}), Error);
  EXPECT_THROW(NoiselessIdCode::make_deterministic(2, {Dist::point(2, 0)}, {{2}}), Error);
  EXPECT_THROW(Dist(std::vector<Rational>{Rational(1, 2), Rational(1, 3)}), Error);
}

TEST(Noiseless, MatrixCapKeepsMaxima) {
  RngStream rng(4);
  auto c = random_noiseless(5, 6, true, rng);
  auto full = eval_noiseless(c);
  auto capped = eval_noiseless(c, 3);
  EXPECT_FALSE(capped.matrix.has_value());
  EXPECT_EQ(capped.lambda1, full.lambda1);
  EXPECT_EQ(capped.lambda2, full.lambda2);
}

TEST(Perm, ExactExamples) {
  // decoders = own typeclasses, disjoint across messages
  auto zero = PermIdCode::from_sets(2, 2, 1, {WordDist({{Word{1, 1}, Rational(1)}}), WordDist({{Word{1, 2}, Rational(1)}})},
                                    {{Word{1, 1}}, {Word{1, 2}, Word{2, 1}}});
  auto r = eval_perm_exact(zero);
  EXPECT_EQ(r.lambda1, 0);
  EXPECT_EQ(r.lambda2, 0);

  auto half = PermIdCode::from_sets(2, 2, 1, {WordDist({{Word{1, 2}, Rational(1)}})}, {{Word{2, 1}}});
  EXPECT_EQ((*eval_perm_exact(half).missed)[0], Rational(1, 2));
}

TEST(Perm, ExactMatchesBruteForce) {
  RngStream rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t q = 2 + rng.uniform(2);
    const std::uint32_t l = 1 + rng.uniform(2);
    const std::uint32_t n = 1 + rng.uniform(l == 1 ? 4 : 2);
    const auto M = 1 + rng.uniform(4);
    auto code = random_perm_code(n, q, l, M, rng);
    EXPECT_EQ(eval_perm_exact(code), permid::testing::eval_perm_bruteforce(code)) << n << " " << q << " " << l;
  }
}

TEST(Perm, MonteCarloHalf) {
  auto code = PermIdCode::from_sets(2, 2, 1, {WordDist({{Word{1, 2}, Rational(1)}}), WordDist({{Word{1, 2}, Rational(1)}})},
                                    {{Word{1, 2}, Word{2, 1}}, {Word{1, 2}}});
  EXPECT_EQ((*eval_perm_exact(code).matrix)[0][1], Rational(1, 2));
  auto mc = eval_perm_mc(code, 100000, RngStream(1));
  const double est = (*mc.estimate.matrix)[0][1].get_d();
  EXPECT_LE(std::abs(est - 0.5), 3 * std::sqrt(0.25 / 100000));
  auto again = eval_perm_mc(code, 100000, RngStream(1));
  EXPECT_EQ(mc.estimate, again.estimate);
}

TEST(Perm, MonteCarloAgreesWithExact) {
  RngStream rng(33);
  int entries = 0;
  for (int c = 0; c < 50; ++c) {
    const std::uint32_t n = 1 + rng.uniform(6);
    const std::uint32_t q = 2 + rng.uniform(2);
    const auto M = 1 + rng.uniform(8);
    auto code = random_count_code(n, q, M, rng);
    auto exact = eval_perm_exact(code);
    auto mc = eval_perm_mc(code, 100000, rng.split(c));
    for (std::uint64_t i = 0; i < M; ++i)
      for (std::uint64_t j = 0; j < M; ++j) {
        const double p = i == j ? (*exact.missed)[i].get_d() : (*exact.matrix)[i][j].get_d();
        const double e = i == j ? (*mc.estimate.missed)[i].get_d() : (*mc.estimate.matrix)[i][j].get_d();
        const double sigma = std::sqrt(p * (1 - p) / 100000);
        EXPECT_LE(std::abs(e - p), 4 * sigma + 1e-12) << "code " << c << " entry " << i << "," << j;
        ++entries;
      }
  }
  EXPECT_GT(entries, 50);
}

TEST(Perm, MonteCarloExplicitSetsPath) {
  RngStream rng(9);
  auto code = random_perm_code(3, 2, 2, 3, rng);
  auto exact = eval_perm_exact(code);
  auto mc = eval_perm_mc(code, 20000, rng.split("mc"));
  for (std::uint64_t i = 0; i < 3; ++i)
    for (std::uint64_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double p = (*exact.matrix)[i][j].get_d();
      EXPECT_LE(std::abs((*mc.estimate.matrix)[i][j].get_d() - p), 4 * std::sqrt(p * (1 - p) / 20000) + 1e-12);
    }
}

TEST(Distance, Examples) {
  EXPECT_EQ(tv_distance(Dist::point(3, 1), Dist::point(3, 1)), 0);
  EXPECT_EQ(tv_distance(Dist::point(3, 1), Dist::point(3, 2)), 2);
  EXPECT_EQ(tv_distance(Dist(std::vector<Rational>{Rational(1, 2), Rational(1, 2)}), Dist::point(2, 0)), 1);
  EXPECT_THROW(tv_distance(Dist::point(3, 1), Dist::point(2, 1)), Error);
}

TEST(Distance, StrongConverseFloor) {
  auto same = NoiselessIdCode::make_deterministic(3, {Dist::point(3, 1), Dist::point(3, 1)}, {{1}, {0}});
  EXPECT_EQ(strong_converse_floor(same), 1);
  EXPECT_GE(eval_noiseless(same).lambda, 1);
  auto apart = NoiselessIdCode::make_deterministic(3, {Dist::point(3, 1), Dist::point(3, 2)}, {{1}, {2}});
  EXPECT_EQ(strong_converse_floor(apart), 0);
  EXPECT_THROW(strong_converse_floor(NoiselessIdCode::make_deterministic(2, {Dist::point(2, 0)}, {{0}})), Error);

  RngStream rng(17);
  for (int k = 0; k < 300; ++k) {
    auto code = random_noiseless(2 + rng.uniform(5), 2 + rng.uniform(3), k % 2 == 0, rng);
    EXPECT_GE(eval_noiseless(code).lambda, strong_converse_floor(code));
  }
}

TEST(Achievable, OneShotLambda1Zero) {
  RngStream rng(40);
  AchievableParams p;
  p.n = 40;
  p.epsilon = Rational(1, 100);
  auto built = build_oneshot_achievable(p, rng);
  EXPECT_TRUE(built.report.hypotheses_hold);
  EXPECT_EQ(built.report.ground, 41u);
  EXPECT_EQ(built.report.Gamma, 6u);
  EXPECT_FALSE(built.report.exhausted);
  auto r = eval_perm_exact(built.code);
  EXPECT_EQ(r.lambda1, 0);
  EXPECT_LE(r.lambda2, built.report.lambda2_bound);
  EXPECT_EQ(r.lambda2, verify_profile(built.report.system).ratio());
}

TEST(Achievable, InfeasibleReportsSuggestion) {
  RngStream rng(1);
  AchievableParams p;
  p.n = 10;
  p.epsilon = Rational(1, 100);
  try {
    build_oneshot_achievable(p, rng);
    FAIL() << "expected infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "infeasible");
    EXPECT_NE(std::string(e.what()).find("smallest feasible n"), std::string::npos) << e.what();
  }
  p.epsilon = Rational(1, 4);
  EXPECT_THROW(build_oneshot_achievable(p, rng), Error);
}

TEST(Achievable, CapZeroGivesDisjointDecoders) {
  RngStream rng(2);
  auto built = build_from_parameters(7, 2, 1, 2, 0, 4, rng);  // N = 8: four disjoint pairs
  auto r = eval_perm_exact(built.code);
  EXPECT_EQ(r.lambda1, 0);
  EXPECT_EQ(r.lambda2, 0);

  auto multi = build_from_parameters(3, 2, 2, 2, 0, 8, rng);  // N^l = 16
  EXPECT_EQ(multi.code.outcomes(), 16u);
  auto rm = eval_perm_exact(multi.code);
  EXPECT_EQ(rm.lambda1, 0);
  EXPECT_EQ(rm.lambda2, 0);
}

TEST(Achievable, MultishotDegeneratesToOneShot) {
  AchievableParams p;
  p.n = 60;
  p.epsilon = Rational(1, 20);
  RngStream a(5), b(5);
  auto one = build_oneshot_achievable(p, a);
  p.l = 1;
  auto multi = build_multishot_achievable(p, b);
  EXPECT_EQ(one.code.encoders, multi.code.encoders);
  EXPECT_EQ(one.code.accept_counts, multi.code.accept_counts);
}

TEST(Achievable, MultishotLambda1Zero) {
  AchievableParams p;
  p.n = 8;
  p.l = 2;
  p.epsilon = Rational(1, 100);
  RngStream rng(6);
  auto built = build_multishot_achievable(p, rng);
  EXPECT_EQ(built.report.ground, 81u);
  auto r = eval_perm_exact(built.code);
  EXPECT_EQ(r.lambda1, 0);
  EXPECT_LE(r.lambda2, built.report.lambda2_bound);
}
