#include <gtest/gtest.h>

#include <set>

#include "f0mc/rng.hpp"

TEST(Rng, PhiloxKnownAnswer) {
  // Philox4x32-10 with zero key and zero counter.
  f0mc::Rng rng(0, 0);
  EXPECT_EQ(rng.next_u32(), 0x6627e8d5U);
  EXPECT_EQ(rng.next_u32(), 0xe169c58dU);
  EXPECT_EQ(rng.next_u32(), 0xbc57ac4cU);
  EXPECT_EQ(rng.next_u32(), 0x9b00dbd8U);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  f0mc::Rng a(17, 3);
  f0mc::Rng b(17, 3);
  f0mc::Rng c(17, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformStaysInBounds) {
  f0mc::Rng rng(5, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, SubstreamsSpread) {
  std::set<std::uint64_t> ids;
  for (std::uint64_t i = 0; i < 1000; ++i) ids.insert(f0mc::Rng::substream(9, i));
  EXPECT_EQ(ids.size(), 1000u);
}
