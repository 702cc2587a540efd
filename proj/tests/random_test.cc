// Copyright 2026 The FedRidge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedridge/random.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"

namespace fedridge {
namespace {

TEST(RngTest, NormalsMatchIndependentStream) {
  Rng rng(12345);
  oracle::NormalStream reference(12345);
  for (int i = 0; i < 1001; ++i) {
    EXPECT_EQ(rng.Normal(), reference.Next()) << "draw " << i;
  }
}

TEST(RngTest, UniformIsTop53Bits) {
  Rng rng(9);
  oracle::NormalStream reference(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.Uniform(), reference.Uniform());
}

TEST(RngTest, UniformStaysInUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngTest, NormalMomentsAreStandard) {
  Rng rng(2024);
  constexpr int kDraws = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.Normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, 1.0, 0.01);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, UniformIndexCoversRangeWithoutEscaping) {
  Rng rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const uint64_t k = rng.UniformIndex(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> values(50);
  std::iota(values.begin(), values.end(), 0);
  rng.Shuffle(values);
  std::vector<int> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  std::vector<int> identity(50);
  std::iota(identity.begin(), identity.end(), 0);
  EXPECT_NE(values, identity);
}

TEST(MixSeedTest, DistinctStreamsGiveDistinctSeeds) {
  std::set<uint64_t> seen;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    for (uint64_t stream = 0; stream < 20; ++stream) {
      seen.insert(MixSeed(seed, stream));
    }
  }
  EXPECT_EQ(seen.size(), 400u);
}

TEST(MixSeedTest, TwoLevelIsNested) {
  EXPECT_EQ(MixSeed(4, 5, 6), MixSeed(MixSeed(4, 5), 6));
  EXPECT_NE(MixSeed(4, 5, 6), MixSeed(4, 6, 5));
}

}  // namespace
}  // namespace fedridge
