// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#include "infotrack/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace infotrack;

TEST(RandomStream, SameKeySameSequence) {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
}

TEST(RandomStream, DerivedKeysAreOrderIndependent) {
  // Stream for (master, index) must not depend on when or where it is made.
  const std::uint64_t master = 0xDEADBEEF;
  std::vector<std::uint64_t> forward, backward;
  for (int i = 0; i < 64; ++i) {
    forward.push_back(RandomStream(derive_key(master, i)).next_u64());
  }
  for (int i = 63; i >= 0; --i) {
    backward.push_back(RandomStream(derive_key(master, i)).next_u64());
  }
  for (int i = 0; i < 64; ++i) {
    EXPECT_EQ(forward[static_cast<std::size_t>(i)],
              backward[static_cast<std::size_t>(63 - i)]);
  }
}

TEST(RandomStream, DistinctCounterWordsGiveDistinctStreams) {
  EXPECT_NE(derive_key(1, 2, 3), derive_key(1, 3, 2));
  EXPECT_NE(derive_key(1, 0), derive_key(2, 0));
  EXPECT_NE(derive_key(1, 0, 0, 0), derive_key(1, 0, 0, 1));
}

TEST(RandomStream, UniformStaysInHalfOpenUnitInterval) {
  RandomStream rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStream, NormalMomentsAreSane) {
  RandomStream rng(11);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(RandomStream, ScaledNormalIsExactAtZeroStddev) {
  RandomStream rng(13);
  EXPECT_EQ(rng.normal(3.5, 0.0), 3.5);
}
