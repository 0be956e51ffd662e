#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "nflab/rng.hpp"

namespace {

using namespace nflab;

// Known-answer vectors published with the Random123 library (kat_vectors).
TEST(Philox, KnownAnswers) {
  struct Kat {
    Philox4x32::Counter ctr;
    Philox4x32::Key key;
    Philox4x32::Counter expected;
  };
  const Kat kats[] = {
      {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
      {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
       {0xffffffff, 0xffffffff},
       {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
      {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
       {0xa4093822, 0x299f31d0},
       {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
  };
  for (const auto& k : kats) EXPECT_EQ(Philox4x32::block(k.ctr, k.key), k.expected);
}

TEST(CounterRng, Deterministic) {
  CounterRng a(42, 7, Stream::noise), b(42, 7, Stream::noise);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterRng, SubstreamsDiffer) {
  auto first = [](std::uint64_t seed, std::uint64_t trial, Stream s) {
    CounterRng r(seed, trial, s);
    return r();
  };
  std::set<std::uint64_t> seen;
  for (Stream s : {Stream::fading, Stream::noise, Stream::message, Stream::shift, Stream::test})
    for (std::uint64_t trial : {0ull, 1ull, 1ull << 32, 12345ull})
      for (std::uint64_t seed : {0ull, 1ull, 1ull << 40}) seen.insert(first(seed, trial, s));
  EXPECT_EQ(seen.size(), 5u * 4u * 3u);
}

TEST(CounterRng, IndependentOfDrawOrderAcrossTrials) {
  // Drawing trial 5 before or after trial 3 gives the same numbers.
  CounterRng a(9, 5, Stream::noise);
  const double x = a.normal();
  CounterRng b(9, 3, Stream::noise);
  (void)b.normal();
  CounterRng c(9, 5, Stream::noise);
  EXPECT_EQ(x, c.normal());
}

TEST(CounterRng, UniformMoments) {
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int t = 0; t < n / 100; ++t) {
    CounterRng r(1, t, Stream::test);
    for (int i = 0; i < 100; ++i) {
      const double u = r.uniform();
      ASSERT_GT(u, 0.0);
      ASSERT_LT(u, 1.0);
      s += u;
      s2 += u * u;
    }
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(var, 1.0 / 12.0, 5e-3 * (1.0 / 12.0) * 2);
}

TEST(CounterRng, NormalMoments) {
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  CounterRng r(3, 0, Stream::test);
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(CounterRng, BelowIsUniform) {
  const int bound = 7, n = 70000;
  std::vector<int> counts(bound, 0);
  CounterRng r(5, 0, Stream::message);
  for (int i = 0; i < n; ++i) {
    const auto v = r.below(bound);
    ASSERT_LT(v, static_cast<std::uint64_t>(bound));
    ++counts[v];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 22.46);  // χ²(6) upper 0.1% point
  CounterRng one(5, 0, Stream::message);
  EXPECT_EQ(one.below(1), 0u);
}

}  // namespace
