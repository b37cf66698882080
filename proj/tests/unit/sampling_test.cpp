// Copyright 2026 The kgemf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/sampling.hpp"
#include "oracles.hpp"

namespace kgemf {
namespace {

std::vector<Triple> positives(std::size_t n) {
  std::vector<Triple> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({static_cast<EntityId>(i % 10), static_cast<RelationId>(i % 3),
                   static_cast<EntityId>((i + 1) % 10)});
  }
  return out;
}

TEST(UniformSampler, ZeroNegatives) {
  const auto b = uniform_sample(positives(5), 0, 10, 1, CorruptionMode::kBoth);
  EXPECT_TRUE(b.negatives.empty());
  EXPECT_TRUE(b.sides.empty());
}

TEST(UniformSampler, CountAndLayout) {
  const auto pos = positives(5);
  const auto b = uniform_sample(pos, 3, 10, 2, CorruptionMode::kBoth);
  ASSERT_EQ(b.negatives.size(), 15u);
  ASSERT_EQ(b.sides.size(), 15u);
  EXPECT_EQ(b.k, 3u);
  for (std::size_t j = 0; j < 5; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      const Triple& n = b.negatives[j * 3 + i];
      EXPECT_EQ(n.relation, pos[j].relation);
      if (b.sides[j * 3 + i] == CorruptionSide::kHead) {
        EXPECT_EQ(n.tail, pos[j].tail);
      } else {
        EXPECT_EQ(n.head, pos[j].head);
      }
      EXPECT_LT(n.head, 10u);
      EXPECT_LT(n.tail, 10u);
    }
  }
}

TEST(UniformSampler, SingleSideModes) {
  const auto pos = positives(20);
  for (auto mode : {CorruptionMode::kHead, CorruptionMode::kTail}) {
    const auto b = uniform_sample(pos, 4, 10, 3, mode);
    const auto want = mode == CorruptionMode::kHead ? CorruptionSide::kHead : CorruptionSide::kTail;
    for (auto s : b.sides) EXPECT_EQ(s, want);
  }
}

TEST(UniformSampler, BothModeSplitsEvenly) {
  const auto b = uniform_sample(positives(7), 4, 10, 4, CorruptionMode::kBoth);
  std::size_t heads = 0;
  for (auto s : b.sides) heads += s == CorruptionSide::kHead;
  EXPECT_EQ(heads, 14u);
}

TEST(UniformSampler, ReplacementIsUniform) {
  const std::size_t n = 10;
  const auto pos = positives(1000);
  const auto b = uniform_sample(pos, 100, n, 5, CorruptionMode::kTail);
  ASSERT_EQ(b.negatives.size(), 100000u);
  std::vector<double> counts(n, 0.0);
  for (const Triple& t : b.negatives) counts[t.tail] += 1.0;
  const double expected = 100000.0 / n;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, testing::chi_square_99(n - 1));
}

TEST(UniformSampler, DeterministicForSeed) {
  const auto pos = positives(30);
  const auto a = uniform_sample(pos, 5, 10, 42, CorruptionMode::kBoth);
  const auto b = uniform_sample(pos, 5, 10, 42, CorruptionMode::kBoth);
  const auto c = uniform_sample(pos, 5, 10, 43, CorruptionMode::kBoth);
  EXPECT_EQ(a.negatives, b.negatives);
  EXPECT_NE(a.negatives, c.negatives);
}

TEST(UniformSampler, TooFewEntities) {
  EXPECT_KGEMF_ERROR(UniformNegativeSampler(1, CorruptionMode::kBoth),
                     ErrorCode::kTooFewEntities);
}

TEST(CorruptionMode, Names) {
  for (auto m : {CorruptionMode::kHead, CorruptionMode::kTail, CorruptionMode::kBoth}) {
    EXPECT_EQ(parse_corruption_mode(corruption_mode_name(m)), m);
  }
  EXPECT_KGEMF_ERROR(parse_corruption_mode("middle"), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace kgemf
