#include "permid/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace permid;

TEST(Channel, TransitionExamples) {
  PermutationChannel ch2(2, 2);
  EXPECT_EQ(ch2.transition_prob(Word{1, 2}, Word{2, 1}), Rational(1, 2));
  EXPECT_EQ(ch2.transition_prob(Word{1, 1}, Word{1, 2}), Rational(0));
  PermutationChannel ch3(3, 2);
  for (const Word& y : {Word{1, 1, 2}, Word{1, 2, 1}, Word{2, 1, 1}}) EXPECT_EQ(ch3.transition_prob(Word{1, 1, 2}, y), Rational(1, 3));
  EXPECT_THROW(ch3.transition_prob(Word{1, 2}, Word{1, 2, 1}), Error);
}

TEST(Channel, RowsSumToOne) {
  for (std::uint32_t n = 1; n <= 5; ++n)
    for (std::uint32_t q = 2; q <= 3; ++q) {
      PermutationChannel ch(n, q);
      std::vector<Word> words;
      Word w(n, 1);
      for (;;) {
        words.push_back(w);
        std::size_t k = 0;
        while (k < n && w[n - 1 - k] == q) w[n - 1 - k++] = 1;
        if (k == n) break;
        ++w[n - 1 - k];
      }
      for (const auto& x : words) {
        Rational total = 0;
        for (const auto& y : words) total += ch.transition_prob(x, y);
        EXPECT_EQ(total, 1);
      }
    }
}

TEST(Channel, PermutationInvarianceOfLaw) {
  RngStream rng(3);
  PermutationChannel ch(6, 3);
  for (int t = 0; t < 200; ++t) {
    Word x(6), y(6);
    for (auto& s : x) s = static_cast<Symbol>(1 + rng.uniform(3));
    for (auto& s : y) s = static_cast<Symbol>(1 + rng.uniform(3));
    if (t % 2 == 0) y = ch.sample_output(x, rng);
    Word sx = x;
    for (std::size_t i = sx.size(); i > 1; --i) std::swap(sx[i - 1], sx[rng.uniform(i)]);
    EXPECT_EQ(ch.transition_prob(x, y), ch.transition_prob(sx, y));
  }
}

TEST(Channel, SamplingSingletonAndDeterminism) {
  PermutationChannel ch(5, 3);
  RngStream rng(1);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(ch.sample_output(Word(5, 2), rng), Word(5, 2));
  RngStream a(99), b(99);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(ch.sample_output(Word{1, 2, 3, 1, 2}, a), ch.sample_output(Word{1, 2, 3, 1, 2}, b));
}

TEST(Channel, SamplingFrequencyBinary) {
  PermutationChannel ch(2, 2);
  RngStream rng(2024);
  const int trials = 100000;
  int hits = 0;
  for (int k = 0; k < trials; ++k) hits += ch.sample_output(Word{1, 2}, rng) == Word{2, 1};
  const double sigma = std::sqrt(trials * 0.25);
  EXPECT_LE(std::abs(hits - trials / 2.0), 3 * sigma);
}

TEST(Channel, SamplingChiSquare) {
  // orbit of (1,1,2,2,3) has 30 elements
  PermutationChannel ch(5, 3);
  const Word x{1, 1, 2, 2, 3};
  RngStream rng(77);
  std::map<Word, int> freq;
  const int trials = 100000;
  for (int k = 0; k < trials; ++k) ++freq[ch.sample_output(x, rng)];
  ASSERT_EQ(freq.size(), 30u);
  const double expected = trials / 30.0;
  double chi2 = 0;
  for (const auto& [w, c] : freq) {
    EXPECT_EQ(type_of(w, 3), type_of(x, 3));
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 58.3);  // 0.999 quantile of chi-square with 29 dof
}

TEST(Channel, OutputTypeDist) {
  PermutationChannel ch(2, 2);
  auto point = ch.output_type_dist(WordDist({{Word{1, 2}, Rational(1)}}));
  EXPECT_EQ(point, Dist::point(3, 1));
  auto same_orbit = ch.output_type_dist(WordDist::uniform({Word{1, 2}, Word{2, 1}}));
  EXPECT_EQ(same_orbit, Dist::point(3, 1));
  auto split = ch.output_type_dist(WordDist::uniform({Word{1, 1}, Word{1, 2}}));
  EXPECT_EQ(split[0], Rational(1, 2));
  EXPECT_EQ(split[1], Rational(1, 2));
  EXPECT_EQ(split[2], Rational(0));
}

TEST(Channel, Noiseless) {
  NoiselessChannel ch(4);
  EXPECT_EQ(ch.transition_prob(2, 2), Rational(1));
  EXPECT_EQ(ch.transition_prob(2, 3), Rational(0));
  EXPECT_THROW(ch.transition_prob(4, 0), Error);
}

TEST(Channel, BlockTypeIndex) {
  MixedRadix radix(4, 2);  // n=3, q=2
  EXPECT_EQ(block_type_index(Word{1, 1, 1, 2, 2, 2}, 3, 2, radix), 3u);
  EXPECT_EQ(block_type_index(Word{2, 2, 2, 1, 1, 1}, 3, 2, radix), 12u);
  EXPECT_EQ(block_type_index(Word{1, 2, 1, 2, 1, 2}, 3, 2, radix), 1u * 4 + 2);
}
