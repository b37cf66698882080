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

#include <cmath>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "kgemf/regularizer.hpp"
#include "oracles.hpp"

namespace kgemf {
namespace {

ModelParams one_row_model(std::vector<double> values) {
  ModelOptions o;
  o.kind = "DistMult";
  o.num_entities = 1;
  o.num_relations = 1;
  o.dim = values.size();
  ModelParams p(o);
  std::copy(values.begin(), values.end(), p.table(0).values.begin());
  return p;
}

RegularizerSpec spec_of(RegularizerKind kind, double weight, double p = 3.0) {
  return {kind, weight, p};
}

const std::vector<RowKey> kRow0{{0, 0}};

TEST(Regularizer, ZeroWeightIsFree) {
  const ModelParams p = one_row_model({1.0, -2.0});
  for (auto kind : {RegularizerKind::kL1, RegularizerKind::kL2, RegularizerKind::kPowerSum}) {
    const Regularization r = regularize(p, kRow0, spec_of(kind, 0.0));
    EXPECT_EQ(r.penalty, 0.0);
    for (const auto& [key, row] : r.gradients) {
      for (double v : row) EXPECT_EQ(v, 0.0);
    }
  }
  EXPECT_EQ(regularize(p, kRow0, spec_of(RegularizerKind::kNoOp, 5.0)).penalty, 0.0);
}

TEST(Regularizer, L2HandValue) {
  const ModelParams p = one_row_model({3.0, 4.0});
  EXPECT_DOUBLE_EQ(regularize(p, kRow0, spec_of(RegularizerKind::kL2, 1.0)).penalty, 25.0);
}

TEST(Regularizer, PowerSumHandValue) {
  const ModelParams p = one_row_model({2.0});
  EXPECT_DOUBLE_EQ(regularize(p, kRow0, spec_of(RegularizerKind::kPowerSum, 0.5, 3.0)).penalty,
                   4.0);
}

TEST(Regularizer, L1HandValue) {
  const ModelParams p = one_row_model({-1.5, 2.0, 0.25});
  EXPECT_DOUBLE_EQ(regularize(p, kRow0, spec_of(RegularizerKind::kL1, 2.0)).penalty, 7.5);
}

TEST(Regularizer, OnlyTouchedRowsAndDeduplicated) {
  const ModelParams p = testing::random_model("DistMult", 5, 2, 3, 4);
  const std::vector<RowKey> rows{{0, 1}, {0, 1}, {1, 0}};
  const Regularization r = regularize(p, rows, spec_of(RegularizerKind::kL2, 1.0));
  double expected = 0.0;
  for (double v : p.table(0).row(1)) expected += v * v;
  for (double v : p.table(1).row(0)) expected += v * v;
  EXPECT_NEAR(r.penalty, expected, 1e-14);
  EXPECT_EQ(r.gradients.keys(), (std::vector<RowKey>{{0, 1}, {1, 0}}));
}

TEST(Regularizer, GradientsMatchFiniteDifferences) {
  const ModelParams p = testing::random_model("ComplEx", 4, 2, 3, 7);
  const std::vector<RowKey> rows{{0, 0}, {0, 3}, {1, 1}};
  for (auto spec : {spec_of(RegularizerKind::kL1, 0.3), spec_of(RegularizerKind::kL2, 0.7),
                    spec_of(RegularizerKind::kPowerSum, 0.2, 3.0),
                    spec_of(RegularizerKind::kPowerSum, 1.1, 2.5)}) {
    const Regularization r = regularize(p, rows, spec);
    const double err = testing::fd_max_error(
        p, [&](const ModelParams& q) { return regularize(q, rows, spec).penalty; },
        r.gradients);
    EXPECT_LT(err, 1e-6) << regularizer_kind_name(spec.kind);
    EXPECT_GE(r.penalty, 0.0);
  }
}

TEST(Regularizer, RejectsInvalidSpecs) {
  EXPECT_KGEMF_ERROR(make_regularizer(spec_of(RegularizerKind::kL2, -1.0)),
                     ErrorCode::kInvalidArgument);
  EXPECT_KGEMF_ERROR(make_regularizer(spec_of(RegularizerKind::kPowerSum, 1.0, 0.5)),
                     ErrorCode::kInvalidArgument);
  EXPECT_EQ(parse_regularizer_kind("PowerSum"), RegularizerKind::kPowerSum);
  EXPECT_EQ(make_regularizer(spec_of(RegularizerKind::kL1, 1.0))->name(), "L1");
}

}  // namespace
}  // namespace kgemf
